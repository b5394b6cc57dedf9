import itertools
from fractions import Fraction as F

from tautrel.graphs import (DecoratedGraph, StableGraph, StrataVector,
                            enumerate_decorated_basis, enumerate_stable_graphs,
                            forgetful_pushforward, gluing_pushforward,
                            multiply_kappa, multiply_psi)


def brute_force_count(g, n, max_edges):
    """Independent generate-and-filter enumeration over labeled data."""
    seen = set()
    max_v = max(1, 2 * g - 2 + n)
    for nv in range(1, max_v + 1):
        for ne in range(nv - 1, max_edges + 1):
            total_genus = g - (ne - nv + 1)
            if total_genus < 0:
                continue
            pairs = [(i, j) for i in range(nv) for j in range(i, nv)]
            for genera in itertools.product(range(total_genus + 1), repeat=nv):
                if sum(genera) != total_genus:
                    continue
                for edges in itertools.combinations_with_replacement(pairs, ne):
                    for assignment in itertools.product(range(nv), repeat=n):
                        legs = [[] for _ in range(nv)]
                        for label, v in enumerate(assignment, start=1):
                            legs[v].append(label)
                        graph = StableGraph(genera, legs, edges)
                        if graph.is_stable():
                            seen.add(graph.key())
    return len(seen)


def test_enumeration_counts_match_brute_force():
    # (0,6) and (0,7) also match but take the brute force tens of seconds;
    # they are exercised by the enumerator itself in the relations closures
    for g, n in [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (2, 0), (1, 3), (2, 1)]:
        dim = 3 * g - 3 + n
        got = len(enumerate_stable_graphs(g, n, dim))
        assert got == brute_force_count(g, n, dim)


def test_enumeration_counts_match_brute_force_14():
    assert len(enumerate_stable_graphs(1, 4, 4)) == brute_force_count(1, 4, 4)


def test_known_counts():
    assert len(enumerate_stable_graphs(0, 3, 0)) == 1
    assert len(enumerate_stable_graphs(1, 1, 1)) == 2
    assert len(enumerate_stable_graphs(0, 4, 1)) == 4
    assert len(enumerate_stable_graphs(0, 5, 2)) == 26
    assert len(enumerate_stable_graphs(2, 0, 3)) == 7


def test_automorphism_orders():
    loop = StableGraph([0], [[1]], [(0, 0)])
    assert loop.aut_order() == 2
    two_g1 = StableGraph([1, 1], [[], []], [(0, 1)])
    assert two_g1.aut_order() == 2
    theta = StableGraph([0, 0], [[], []], [(0, 1)] * 3)
    assert theta.aut_order() == 12
    two_loops = StableGraph([0], [[]], [(0, 0), (0, 0)])
    assert two_loops.aut_order() == 8
    marked = StableGraph([0, 1], [[1, 2], []], [(0, 1)])
    assert marked.aut_order() == 1


def test_canonical_idempotence():
    dg = DecoratedGraph(StableGraph([0, 0], [[1], [2]], [(0, 1), (0, 1)]),
                        leg_psi={1: 1}, edge_psi=[(1, 0), (0, 0)])
    again = DecoratedGraph(dg.graph, dict(dg.leg_psi), dg.edge_psi, dg.kappa)
    assert dg == again


def test_multiply_psi_kappa():
    smooth = StrataVector.single(DecoratedGraph.smooth(1, 1))
    v = multiply_psi(smooth, 1)
    (dg, c), = v.terms.items()
    assert dg.leg_psi == ((1, 1),) and c == 1
    # dimension bound: psi^2 on (1,1) is zero
    assert multiply_psi(v, 1).is_zero()
    k = multiply_kappa(multiply_kappa(StrataVector.single(DecoratedGraph.smooth(2, 0)), 1), 1)
    (dgk, ck), = k.terms.items()
    assert dgk.kappa == ((1, 1),)


def test_gluing_pushforward_examples():
    # two (0,3) fundamental classes along the (0,4) two-vertex graph
    graph = StableGraph([0, 0], [[1, 2], [3, 4]], [(0, 1)])
    f03 = StrataVector.single(DecoratedGraph.smooth(0, 3))
    glued = gluing_pushforward(graph, [f03, f03])
    (dg, c), = glued.terms.items()
    assert c == 1 and dg.graph == graph and dg.codim() == 1
    # psi on the half-edge marking
    psi3 = StrataVector.single(DecoratedGraph.smooth(0, 3, leg_psi={3: 1}))
    glued = gluing_pushforward(graph, [psi3, f03])
    (dg, c), = glued.terms.items()
    assert dg.edge_psi == ((1, 0),) or dg.edge_psi == ((0, 1),)
    # self-gluing a (0, 3) class to genus 1: the loop graph on (1,1)
    loop = StableGraph([0], [[1]], [(0, 0)])
    glued = gluing_pushforward(loop, [f03])
    (dg, c), = glued.terms.items()
    assert dg.graph == loop
    # grafting a boundary class into a vertex flattens composites
    boundary04 = StrataVector.single(
        DecoratedGraph(StableGraph([0, 0], [[1, 2], [3, 4]], [(0, 1)])))
    outer = StableGraph([0, 1], [[1, 2, 3], []], [(0, 1)])
    glued = gluing_pushforward(outer, [boundary04, StrataVector.single(
        DecoratedGraph.smooth(1, 1))])
    (dg, c), = glued.terms.items()
    assert dg.graph.num_vertices == 3 and len(dg.graph.edges) == 2


def test_forgetful_one_point_rules():
    # pi_*(psi_{n+1}^{a+1}) = kappa_a on a smooth vertex
    for g, n, a in [(1, 1, 1), (0, 3, 1), (2, 0, 2)]:
        v = StrataVector.single(
            DecoratedGraph.smooth(g, n + 1, leg_psi={n + 1: a + 1}))
        out = forgetful_pushforward(v)
        (dg, c), = out.terms.items()
        assert c == 1 and dg.kappa[0] == (a,) and not dg.leg_psi
    # pi_*(psi_{n+1}) = (2g - 2 + n) * fundamental
    v = StrataVector.single(DecoratedGraph.smooth(1, 2, leg_psi={2: 1}))
    out = forgetful_pushforward(v)
    (dg, c), = out.terms.items()
    assert c == 2 * 1 - 2 + 1 and dg.codim() == 0
    # two-point formula: pi_* twice of psi^2 psi^2 -> kappa_1^2 + kappa_2
    v = StrataVector.single(
        DecoratedGraph.smooth(2, 2, leg_psi={1: 2, 2: 2}))
    out = forgetful_pushforward(forgetful_pushforward(v))
    want = {(1, 1): F(1), (2,): F(1)}
    got = {dg.kappa[0]: c for dg, c in out.terms.items()}
    assert got == want


def test_forgetful_string_case():
    # pi_*(psi_1 psi_2) on (0, 4) -> psi_1-lowered strings... against the
    # string equation: pi_*(psi_1^a with trivial last leg) = sum lowerings
    v = StrataVector.single(DecoratedGraph.smooth(0, 4, leg_psi={1: 1, 2: 1}))
    out = forgetful_pushforward(v)  # forget leg 4 (no psi): string terms
    got = {dg.leg_psi: c for dg, c in out.terms.items()}
    assert got == {((1, 1),): F(1), ((2, 1),): F(1)}


def test_forgetful_order_independence():
    v = StrataVector.single(
        DecoratedGraph.smooth(1, 3, leg_psi={1: 1, 2: 2, 3: 1}, kappa=(1,)))
    a = forgetful_pushforward(forgetful_pushforward(v, 3), 2)
    b = forgetful_pushforward(forgetful_pushforward(v, 2), 2)
    # forgetting leg 3 then 2 equals forgetting leg 2 then (relabeled) 2
    assert {d.key() for d in a.terms} == {d.key() for d in b.terms}
    for dg, c in a.terms.items():
        assert b.terms[dg] == c


def test_forgetful_contraction():
    # forgetting the only leg of a (0,3) vertex in a 1-edge graph of (1,2)
    graph = StableGraph([1, 0], [[], [1, 2]], [(0, 1)])
    v = StrataVector.single(DecoratedGraph(graph))
    out = forgetful_pushforward(v, 2)  # leg 2 sits on the (0,3) vertex
    # contraction joins the half-edges: leg 1 moves onto the genus-1 vertex
    (dg, c), = out.terms.items()
    assert dg.graph.num_vertices == 1 and dg.graph.genera == (1,)
    assert not dg.graph.edges and c == 1


def test_dilaton_strata_identity():
    # sum_k (1+b)^(2-2g-n-k)/k! pi_*(prod b psi) = 1, checked to b^4
    for g, n in [(1, 1), (0, 4)]:
        # collect coefficients of b^j for j = 0..4 of the left-hand side;
        # (1+b)^e is expanded with the generalized binomial series
        acc = {j: F(0) for j in range(5)}
        for k in range(0, 5):
            if k == 0:
                pushed = {(): F(1)}  # fundamental class coefficient
            else:
                v = StrataVector.single(DecoratedGraph.smooth(
                    g, n + k, leg_psi={n + j: 1 for j in range(1, k + 1)}))
                for _ in range(k):
                    v = forgetful_pushforward(v)
                if v.is_zero():
                    pushed = {}
                else:
                    (dg, c), = v.terms.items()
                    assert dg.codim() == 0
                    pushed = {(): c}
            coeff = pushed.get((), F(0)) / _fact(k)
            e = 2 - 2 * g - n - k
            for j in range(k, 5):
                acc[j] += coeff * _binom(e, j - k)
        assert acc[0] == 1
        for j in range(1, 5):
            assert acc[j] == 0


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _binom(e, j):
    out = F(1)
    for i in range(j):
        out *= F(e - i, i + 1)
    return out


def test_decorated_basis_enumeration():
    basis = enumerate_decorated_basis(1, 1, 1)
    kinds = sorted(str(dg) for dg in basis)
    assert len(basis) == 3  # psi_1, kappa_1, delta_0
    assert len(enumerate_decorated_basis(0, 4, 1)) == 8  # 4 psi, kappa_1, 3 boundary
