"""R-matrices: flatness recursion, symplectic condition, 2d-family diagnostics.

The flatness equation for the endomorphism series R(z) in the basis of
normalized idempotents is, with W = Psi^{-1} dPsi for the basis change Psi
from normalized idempotents to the flat basis,

    [R(z), du] + z (dR(z) - R(z) W) = 0.

The orientation of the connection term (the basis-change matrix of the
equation acts on coordinate columns) is pinned by the explicit flat-basis
equations of the 2-dimensional family, by the relation between the diagonal
of R^1 and the genus-one potential, and by the reconstruction values of the
genus-one correlators; all three are exercised in the tests.

The recursion: off-diagonal entries of the next order are division by
du_k - du_j, diagonal entries are integrated along the chart, even-order
integration constants are pinned by the symplectic condition
R(z) R^t(-z) = Id and odd-order ones are free (default 0).
"""

from __future__ import annotations

from fractions import Fraction

from .frobenius import ChartError, NonSemisimpleError, integrate_oneform
from .multipoly import MultiPoly
from .puiseux import PuiseuxSeries, SeriesMatrix


class RMatrix:
    """Truncated z-series of matrices in the normalized-idempotent basis."""

    def __init__(self, frame, orders, constants):
        self.frame = frame
        self.orders = list(orders)      # orders[k] = coefficient of z^k
        self.K = len(orders) - 1
        self.constants = dict(constants)
        self._inverse = None

    def __getitem__(self, k):
        return self.orders[k]

    def inverse_orders(self):
        """Coefficients of R(z)^{-1} to the same z-order."""
        if self._inverse is None:
            n = self.frame.dim
            param = self.frame.param
            inv = [SeriesMatrix.identity(n, param)]
            for k in range(1, self.K + 1):
                acc = SeriesMatrix.zero(n, n, param)
                for j in range(1, k + 1):
                    acc = acc + self.orders[j] * inv[k - j]
                inv.append(-acc)
            self._inverse = inv
        return self._inverse

    def transpose_orders(self):
        """Coefficients of R^t(z) (eta = Id in the normalized basis)."""
        return [m.transpose() for m in self.orders]

    def symplectic_defect(self, k):
        """z^k coefficient of R(z) R^t(-z) - Id."""
        n = self.frame.dim
        acc = SeriesMatrix.zero(n, n, self.frame.param)
        for p in range(0, k + 1):
            q = k - p
            term = self.orders[p] * self.orders[q].transpose()
            if q % 2:
                term = -term
            acc = acc + term
        if k == 0:
            acc = acc - SeriesMatrix.identity(n, self.frame.param)
        return acc

    def check_symplectic(self):
        for k in range(1, self.K + 1):
            if not self.symplectic_defect(k).is_zero():
                raise ChartError("symplectic condition fails at z^%d" % k)

    def flatness_residual(self, k, var_index):
        """[R^k, du]_a + (d_a R^{k-1} - R^{k-1} W_a) along chart variable a."""
        frame = self.frame
        n = frame.dim
        du = [frame.du_chart[i][var_index] for i in range(n)]
        Rk = self.orders[k]
        acc = SeriesMatrix([[Rk.entries[i][j] * (du[j] - du[i]) for j in range(n)]
                            for i in range(n)])
        prev = self.orders[k - 1]
        W = frame.psi_connection(var_index)
        dprev = prev.map(lambda e: _dvar(e, frame, var_index))
        return acc + dprev - prev * W

    def check_flatness(self):
        for k in range(1, self.K + 1):
            for a in range(len(self.frame.vars)):
                if not self.flatness_residual(k, a).is_zero():
                    raise ChartError(
                        "flatness residual nonzero at z^%d, variable %s"
                        % (k, self.frame.vars[a]))

    def to_flat(self):
        """Orders of Psi R(z) Psi^{-1}, the flat-basis endomorphism series."""
        psi = self.frame.psi
        psi_inv = self.frame.psi_inv()
        return [psi * m * psi_inv for m in self.orders]

    def scale_orders(self, trunc):
        return RMatrix(self.frame, [m.truncate(trunc) for m in self.orders],
                       self.constants)


def _dvar(series, frame, var_index):
    if var_index == 0:
        return series.derivative()
    return series.derivative_sym(frame.vars[var_index])


def _frame_connection(frame, var_index):
    """W_a = Psi^{-1} d_a Psi; cached on the frame."""
    cache = getattr(frame, "_connection", None)
    if cache is None:
        cache = {}
        frame._connection = cache
    if var_index not in cache:
        dpsi = frame.psi.map(lambda e: _dvar(e, frame, var_index))
        cache[var_index] = frame.psi_inv() * dpsi
    return cache[var_index]


# expose on the frame class (kept here with the solver that needs it)
from .frobenius import IdempotentFrame as _IF  # noqa: E402

_IF.psi_connection = lambda self, a: _frame_connection(self, a)


def solve_flatness(frame, K, constants=None):
    """Solve the flatness equation to order z^K with the given constants.

    ``constants`` maps (idempotent index, z-order) to a rational; only
    odd z-orders are free (default 0), even-order diagonal terms come from
    the symplectic condition.
    """
    if K < 1:
        raise ValueError("K >= 1 required")
    n = frame.dim
    param = frame.param
    constants = dict(constants or {})
    orders = [SeriesMatrix.identity(n, param)]
    nvars = len(frame.vars)
    W = [frame.psi_connection(a) for a in range(nvars)]
    du = frame.du_chart
    for k in range(1, K + 1):
        prev = orders[-1]
        rhs = []  # rhs[a] = -(d_a R^{k-1} - R^{k-1} W_a)
        for a in range(nvars):
            dprev = prev.map(lambda e: _dvar(e, frame, a))
            rhs.append(prev * W[a] - dprev)
        entries = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                solved = False
                for a in range(nvars):
                    diff = du[j][a] - du[i][a]
                    o = diff.order()
                    if o is None:
                        continue
                    if not diff.coeffs[min(diff.coeffs)].is_monomial():
                        continue
                    entries[i][j] = rhs[a].entries[i][j] * diff.invert()
                    solved = True
                    break
                if not solved:
                    raise NonSemisimpleError(
                        "non-semisimple chart: du_%d - du_%d vanishes" % (j, i))
        # diagonal
        if k % 2 == 0:
            # pinned by the symplectic condition:
            # 2 R^k_jj = -[sum_{p+q=k, p,q>=1} (-1)^q R^p (R^q)^t]_jj
            for j in range(n):
                acc = PuiseuxSeries.zero(param)
                for p in range(1, k):
                    q = k - p
                    Rp = orders[p]
                    Rq = orders[q]
                    term = sum((Rp.entries[j][m] * Rq.entries[j][m] for m in range(n)),
                               PuiseuxSeries.zero(param))
                    if q % 2:
                        term = -term
                    acc = acc + term
                entries[j][j] = acc * Fraction(-1, 2)
        else:
            # integrate d R^k_jj = (R^k W_a)_jj over the chart
            partial = SeriesMatrix(
                [[entries[i][j] if i != j else PuiseuxSeries.zero(param)
                  for j in range(n)] for i in range(n)])
            for j in range(n):
                comps = []
                for a in range(nvars):
                    acc = PuiseuxSeries.zero(param)
                    for m in range(n):
                        if m != j:
                            acc = acc + partial.entries[j][m] * W[a].entries[m][j]
                    comps.append(acc)
                prim = integrate_oneform(comps, param, frame.expansion.background)
                entries[j][j] = prim + Fraction(constants.get((j, k), 0))
        orders.append(SeriesMatrix(entries))
    R = RMatrix(frame, orders, constants)
    R.check_flatness()
    R.check_symplectic()
    return R


# ---------------------------------------------------------------------------
# the explicit 2-dimensional family (d/dt)^2 = f(t) d/dt0


class FamilyDiagnostics:
    def __init__(self, f, gamma_global, gamma_series, certificate):
        self.f = f
        self.gamma_global = gamma_global      # MultiPoly or None
        self.gamma_series = gamma_series      # {center: PuiseuxSeries}
        self.certificate = certificate        # text of the existence analysis

    def __repr__(self):
        return ("FamilyDiagnostics(gamma_global=%s, centers=%s)"
                % (self.gamma_global, sorted(self.gamma_series)))


def gamma_ode(f):
    """Coefficients (a, b, c) of the gamma equation a g' + b g + c = 0.

    This is 2 f gdot - fdot g + fddot/24 = 0, the f-cleared form of the
    z^2-part of the family flatness equation after c = gamma/f - 5 fdot/48f^2.
    """
    fd = f.derivative("t")
    fdd = fd.derivative("t")
    return 2 * f, -fd, fdd * Fraction(1, 24)


def ode_series_solution(a, b, c, var, center, n_terms):
    """Power-series solution of a y' + b y + c = 0 at var = center.

    Returns the unique solution when the indicial structure pins it (center a
    simple root of ``a``); at an ordinary point the constant term defaults
    to 0.  Raises on resonance (no power-series solution).
    """
    center = Fraction(center)
    s = MultiPoly.var(var)
    if center:
        shift = s + MultiPoly.const(center)
        a = a.substitute(var, shift)
        b = b.substitute(var, shift)
        c = c.substitute(var, shift)

    def coeff(poly, k):
        if k < 0:
            return Fraction(0)
        return poly.coefficient(((var, Fraction(k)),) if k else ())

    deg = 0
    for poly in (a, b, c):
        for mono in poly.terms:
            for sym, e in mono:
                if sym == var:
                    deg = max(deg, int(e))
    a0, a1, b0 = coeff(a, 0), coeff(a, 1), coeff(b, 0)
    y = {}

    def equation_value(j):
        # known part of the t^j coefficient of a y' + b y + c from solved y's
        val = Fraction(coeff(c, j))
        for m in range(deg + 1):
            i = j - m + 1
            if i in y:
                val += coeff(a, m) * i * y[i]
            i = j - m
            if i in y:
                val += coeff(b, m) * y[i]
        return val

    if a0 != 0:
        # ordinary point: y_0 is free (default 0), t^j determines y_{j+1}
        y[0] = Fraction(0)
        for j in range(n_terms + 1):
            val = equation_value(j)
            y[j + 1] = -val / (a0 * (j + 1))
    elif a1 != 0 or b0 != 0:
        # simple root of a: t^j determines y_j with coefficient a1*j + b0
        for j in range(n_terms + 1):
            piv = a1 * j + b0
            val = equation_value(j)
            if piv == 0:
                if val != 0:
                    raise ChartError(
                        "resonance at order %d: no power-series solution" % j)
                y[j] = Fraction(0)
            else:
                y[j] = -val / piv
    else:
        raise ChartError("center is a multiple root of the leading coefficient")
    coeffs = {k: MultiPoly.const(v) for k, v in y.items() if k <= n_terms and v != 0}
    return PuiseuxSeries(var, coeffs, 1, Fraction(n_terms + 1))


def rational_solution(a, b, c, var="t"):
    """Polynomial solution of a y' + b y + c = 0, or None with a certificate.

    For the family equations the indicial exponents at every root of ``a``
    are non-integral, so any solution meromorphic near the roots is in fact
    polynomial; absence of a polynomial solution certifies that no global
    meromorphic solution exists.
    """
    deg_bound = 0
    da = max((int(e) for mono in a.terms for s, e in mono if s == var), default=0)
    db = max((int(e) for mono in b.terms for s, e in mono if s == var), default=0)
    dc = max((int(e) for mono in c.terms for s, e in mono if s == var), default=0)
    # leading balance: coefficient of t^(d + max(da-1, db))
    top = max(da - 1, db)
    for d in range(0, dc + da + db + 3):
        lead = Fraction(0)
        if da - 1 == top:
            lead += a.coefficient(((var, Fraction(da)),)) * d
        if db == top:
            lead += b.coefficient(((var, Fraction(db)),))
        if lead == 0:
            deg_bound = max(deg_bound, d)
    deg_bound = max(deg_bound, dc - top if top >= 0 else dc, 0)
    # solve the linear system for y = sum y_d t^d by brute force
    unknowns = ["__y%d" % d for d in range(deg_bound + 1)]
    y = MultiPoly()
    for d, u in enumerate(unknowns):
        y = y + MultiPoly.var(u) * MultiPoly.var(var) ** d
    resid = a * _poly_dt(y, var) + b * y + c
    # collect linear equations by power of t
    eqs = {}
    for mono, coef in resid.terms.items():
        tpow = 0
        rest = []
        for s, e in mono:
            if s == var:
                tpow = int(e)
            else:
                rest.append((s, e))
        eq = eqs.setdefault(tpow, {})
        key = rest[0][0] if rest else None
        eq[key] = eq.get(key, Fraction(0)) + coef
    sol = _solve_linear(eqs, unknowns)
    if sol is None:
        return None
    out = MultiPoly()
    for d, u in enumerate(unknowns):
        out = out + MultiPoly.const(sol[u]) * MultiPoly.var(var) ** d
    return out


def _poly_dt(p, var):
    return p.derivative(var)


def _solve_linear(eqs, unknowns):
    """Solve {const + sum coef*u = 0 per equation}; None if inconsistent."""
    rows = []
    for tpow in sorted(eqs):
        eq = eqs[tpow]
        row = [eq.get(u, Fraction(0)) for u in unknowns]
        row.append(eq.get(None, Fraction(0)))
        rows.append(row)
    m = len(unknowns)
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        d = rows[r][c]
        rows[r] = [x / d for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][m] != 0:
            return None
    sol = {u: Fraction(0) for u in unknowns}
    for i, c in enumerate(pivots):
        sol[unknowns[c]] = -rows[i][m]
    return sol


def solve_2d_family(f, centers=None, n_terms=12):
    """Gamma diagnostics of the 2d family: local series and global existence.

    ``centers`` defaults to the rational roots of f plus t = 1 when regular.
    """
    a, b, c = gamma_ode(f)
    if centers is None:
        centers = []
        from .frobenius import _rational_roots
        poly = {}
        for mono, coef in f.terms.items():
            e = 0
            for s, ex in mono:
                if s == "t":
                    e = int(ex)
            poly[e] = poly.get(e, Fraction(0)) + coef
        for root, _ in _rational_roots(poly, max(poly)):
            centers.append(root)
        if not any(x == 1 for x in centers):
            centers.append(Fraction(1))
    series = {}
    for center in centers:
        try:
            series[Fraction(center)] = ode_series_solution(a, b, c, "t", center, n_terms)
        except ChartError as exc:
            series[Fraction(center)] = None
    gamma_poly = rational_solution(a, b, c)
    if gamma_poly is not None:
        certificate = "global polynomial solution gamma = %s" % gamma_poly
    else:
        certificate = ("no global meromorphic solution: integral-pole ansatz at the "
                       "roots of f and the polynomial degree bound are jointly "
                       "infeasible")
    return FamilyDiagnostics(f, gamma_poly, series, certificate)


# ---------------------------------------------------------------------------
# holomorphy of quotients R_1 R_2^{-1} in the Psi0-conjugated basis


class QuotientReport:
    def __init__(self, orders, min_orders, residual_ok):
        self.orders = orders          # z-order -> SeriesMatrix of the quotient
        self.min_orders = min_orders  # z-order -> matrix of entry t_D-orders
        self.residual_ok = residual_ok

    def holomorphic(self):
        return all(o is None or o >= 0
                   for mat in self.min_orders.values() for row in mat for o in row)


def quotient_holomorphy(p1, R1, p2, R2, check_residual=True):
    """Entry orders of R~1 R~2^{-1} per z-order, plus the mixed-equation residual.

    ``p1``, ``p2`` are Psi0Frame values over identified (t, t0, u_{>=3})
    coordinates; the identification requires equal t-series.
    """
    if p1.frame.dim != p2.frame.dim:
        raise ChartError("incompatible frames: dimensions differ")
    if not (p1.t - p2.t).is_zero():
        raise ChartError("incompatible frames: t-coordinates differ")
    K = min(R1.K, R2.K)
    tilde1 = [p1.conjugated(R1[k]) for k in range(K + 1)]
    tilde2 = [p2.conjugated(R2[k]) for k in range(K + 1)]
    n = p1.frame.dim
    param = p1.frame.param
    inv2 = [SeriesMatrix.identity(n, param)]
    for k in range(1, K + 1):
        acc = SeriesMatrix.zero(n, n, param)
        for j in range(1, k + 1):
            acc = acc + tilde2[j] * inv2[k - j]
        inv2.append(-acc)
    quotient = {}
    for k in range(K + 1):
        acc = SeriesMatrix.zero(n, n, param)
        for j in range(k + 1):
            acc = acc + tilde1[j] * inv2[k - j]
        quotient[k] = acc
    cover = p1.frame.expansion.cover_degree
    min_orders = {k: [[(None if e.order() is None else e.order() / cover)
                       for e in row] for row in quotient[k].entries]
                  for k in quotient}
    residual_ok = True
    if check_residual:
        residual_ok = _mixed_residual_ok(p1, p2, tilde1, inv2, quotient, K)
    return QuotientReport(quotient, min_orders, residual_ok)


def _mixed_residual_ok(p1, p2, tilde1, inv2, quotient, K):
    """Check the combined flatness equation of the quotient R = R~1 R~2^{-1}:

        0 = [R, Du] + z (dR + [R, Gamma] - R~1 (Theta_1 - Theta_2) R~2^{-1})

    with Du = Psi0 du Psi0^{-1}, Gamma = (dPsi0) Psi0^{-1} and
    Theta_i = Psi0 W_i Psi0^{-1}; the differential is taken along the local
    parameter (our frames depend on background symbols only as constants).
    """
    frame1 = p1.frame
    param = frame1.param
    n = frame1.dim

    def conj_du(p):
        du = SeriesMatrix([[p.frame.du_chart[p.order[i]][0] if i == j
                            else PuiseuxSeries.zero(param)
                            for j in range(n)] for i in range(n)])
        return p.psi0 * du * p.psi0_inv

    Du = conj_du(p1)
    if not (Du - conj_du(p2)).is_zero():
        return False
    gamma = p1.psi0.map(lambda e: e.derivative()) * p1.psi0_inv
    theta = []
    for p in (p1, p2):
        W = p.frame.psi_connection(0)
        theta.append(p.psi0 * p.align(W) * p.psi0_inv)
    dtheta = theta[0] - theta[1]
    for k in range(K):
        Rk1 = quotient[k + 1]
        Rk = quotient[k]
        dRk = Rk.map(lambda e: e.derivative())
        mid = SeriesMatrix.zero(n, n, param)
        for a in range(k + 1):
            mid = mid + tilde1[a] * dtheta * inv2[k - a]
        resid = (Rk1 * Du - Du * Rk1
                 + dRk + Rk * gamma - gamma * Rk - mid)
        if not resid.is_zero():
            return False
    return True
