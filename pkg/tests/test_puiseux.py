import random
from fractions import Fraction as F

import pytest

from tautrel.multipoly import MultiPoly as MP, NonUnitError
from tautrel.puiseux import INF, PuiseuxSeries as PS, SeriesMatrix


def geometric(param, exponent, n_terms):
    """Independent oracle: 1/(1 - param^exponent) summed directly."""
    out = PS.zero(param, trunc=F(exponent) * n_terms)
    for k in range(n_terms):
        out = out + PS.unit(param, F(exponent) * k)
    return out


def binomial_sqrt(param, coeff, n_terms):
    """Independent oracle for sqrt(1 + coeff*t): binomial series."""
    out = PS.zero(param, trunc=n_terms)
    c = F(1)
    for k in range(n_terms):
        # C(1/2, k)
        num = F(1)
        for j in range(k):
            num *= F(1, 2) - j
        term = num / _fact(k)
        out = out + PS.unit(param, k, MP.const(term) * coeff ** k)
    return out


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def test_difference_of_squares():
    a = PS.const(1, "t") + PS.unit("t", 1)
    b = PS.const(1, "t") - PS.unit("t", 1)
    prod = a * b
    assert prod == PS.from_poly(MP.const(1) - MP.var("t") ** 2, "t")


def test_invert_geometric_ramified():
    s = PS.const(1, "t") - PS.unit("t", F(1, 2))
    inv = s.invert(trunc=F(5, 2))
    assert (inv - geometric("t", F(1, 2), 5)).is_zero()
    assert (s * inv - 1).is_zero()


def test_invert_delta1_leading_exponent():
    eta0, eta1 = MP.var("eta0"), MP.var("eta1")
    num = PS.unit("t", F(1, 2), 2)
    den = PS.const(eta1, "t") + PS.unit("t", F(1, 2), eta0)
    delta1 = num * den.invert(trunc=4)
    inv = delta1.invert()
    assert inv.order() == F(-1, 2)
    assert (delta1 * inv - 1).is_zero()


def test_non_unit_leading_term_error():
    s = PS.const(MP.var("eta0") + 1, "t")
    with pytest.raises(NonUnitError, match="non-unit leading term"):
        s.invert(trunc=3)


def test_series_order():
    s = PS.unit("t", 2) + PS.unit("t", 3)
    assert s.order() == 2
    z = PS.zero("t", trunc=F(7, 2))
    assert z.order() is None
    assert z.order_or_trunc() == F(7, 2)


def test_nth_root_examples():
    assert PS.unit("t", 2).sqrt() == PS.unit("t", 1)
    # cube root of a monomial with coefficient 3/4 * zeta3
    mono = PS.unit("t", F(3, 2), MP.const(F(3, 4)) * MP.var("zeta3"))
    root = mono.nth_root(3)
    assert ((root ** 3) - mono).is_zero()
    assert root.order() == F(1, 2)
    # sqrt(1 + t x) against the binomial oracle
    x = MP.var("x")
    s = PS.const(1, "t") + PS.unit("t", 1, x)
    got = s.sqrt(trunc=5)
    assert (got - binomial_sqrt("t", x, 5)).is_zero()


def test_nth_root_randomized_property():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.choice([2, 3])
        terms = {0: MP.const(1)}
        for k in range(1, rng.randint(2, 4)):
            terms[k] = MP.const(F(rng.randint(-3, 3), rng.randint(1, 2)))
        s = PS("t", terms, 1, trunc=4)
        root = s.nth_root(n)
        assert ((root ** n) - s).is_zero()


def test_truncation_monotonicity():
    x = MP.var("x")
    exact = PS.const(1, "t") + PS.unit("t", 1, x)
    low = exact.truncate(3).sqrt()
    high = exact.truncate(6).sqrt()
    for e in low.support():
        assert low.coefficient(e) == high.coefficient(e)


def test_ring_axioms_randomized():
    rng = random.Random(3)

    def rand_series():
        terms = {}
        for _ in range(rng.randint(1, 4)):
            terms[rng.randint(-2, 6)] = MP.const(F(rng.randint(-4, 4), rng.randint(1, 3)))
        return PS("t", terms, rng.choice([1, 2]), trunc=rng.choice([4, 5, INF]))

    for _ in range(60):
        a, b, c = rand_series(), rand_series(), rand_series()
        lhs = (a * b) * c
        rhs = a * (b * c)
        assert (lhs - rhs).is_zero()
        assert ((a + b) * c - (a * c + b * c)).is_zero()


def test_derivative_antiderivative_roundtrip():
    s = PS.unit("t", F(1, 2)) + PS.unit("t", 2, 3)
    assert (s.antiderivative().derivative() - s).is_zero()


def test_matrix_ops():
    two = PS.const(2, "t")
    tt = PS.unit("t", 1, 2)
    m = SeriesMatrix([[two, PS.zero("t")], [PS.zero("t"), tt]])
    assert m.det() == PS.unit("t", 1, 4)
    inv = m.inverse()
    assert (m * inv - SeriesMatrix.identity(2, "t")).is_zero()
    ident = SeriesMatrix.identity(2, "t")
    assert (ident * m - m).is_zero()


def test_psi0_inverse_matches_closed_form():
    # the closed-form inverse of the eq:Psi0 upper block
    t_half = PS.unit("t", F(1, 2))
    p = (t_half * 2).sqrt()
    q = (t_half * (-2)).sqrt()
    p_inv, q_inv = p.invert(), q.invert()
    psi0 = SeriesMatrix([[t_half * p_inv, -t_half * q_inv], [p_inv, q_inv]])
    closed = SeriesMatrix([[p_inv, t_half * p_inv], [q_inv, -t_half * q_inv]])
    assert (psi0 * closed - SeriesMatrix.identity(2, "t")).is_zero()
    computed = psi0.inverse()
    assert (computed - closed).is_zero()


def test_singular_matrix_error():
    t = PS.unit("t", 1)
    m = SeriesMatrix([[t, t], [t, t]])
    with pytest.raises(NonUnitError, match="singular"):
        m.inverse()


def test_canonical_text_form():
    s = PS.unit("t", F(3, 2), F(2, 3)) + PS.const(MP.var("t0"), "t")
    assert str(s.truncate(5)) == "t0 + 2/3*t^(3/2) + O(t^5)"
