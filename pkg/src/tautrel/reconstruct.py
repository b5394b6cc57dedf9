"""Givental-Teleman reconstruction as a sum over colored stable graphs.

The engine evaluates, for a semisimple frame with R-matrix,

    Omega_{g,n}(v_1, ..., v_n) =
      sum_Gamma 1/|Aut| xi_* ( prod_v sum_k Delta_i^((2g_v-2+n_v+k)/2) / k!
          pi_* ( prod legs/edges  prod_j T(psi_j) ) )

with A(psi) applied at legs, the symplectic edge bivector
(A(psi_1) A(psi_2)^t - Id)/(-(psi_1+psi_2)) at edges and the dilaton leaf
T(psi) = psi (Id - A(psi)) 1 at the extra markings, where A(z) is the
flatness solution of the rmatrix module.  In the symplectic-group packaging
the element acting on the TQFT is A(z)^{-1}; the orientation (A versus its
inverse at the legs) is pinned by two independent anchors exercised in the
tests: genus-zero integrals must equal derivatives of the potential, and the
exponential chart (d/dt)^2 = e^t d/dt0 must integrate the genus-one one-point
value -1/24 of the projective line.  Coefficients are exact Puiseux series;
the output is a StrataVector whose basis elements are raw gluing pushforwards
(no 1/|Aut| inside basis classes).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .frobenius import ChartError
from .graphs import (DecoratedGraph, StrataVector, enumerate_stable_graphs,
                     forgetful_pushforward)
from .puiseux import PuiseuxSeries, SeriesMatrix


class CohFTSpec:
    """Frame + R-matrix (+ optional overrides used by the dilaton shift)."""

    def __init__(self, frame, R, sqrt_delta=None, dilaton_vector=None):
        self.frame = frame
        self.R = R
        self.sqrt_delta = sqrt_delta if sqrt_delta is not None else frame.sqrt_delta
        # the vector inside T(psi), in normalized coordinates; defaults to 1
        self.dilaton_vector = (dilaton_vector if dilaton_vector is not None
                               else frame.unit_normalized())

    @property
    def dim(self):
        return self.frame.dim

    @property
    def param(self):
        return self.frame.param

    def delta_power(self, i, m):
        """Delta_i^(m/2) as a series, for integer m of either sign."""
        s = self.sqrt_delta[i]
        if m >= 0:
            return s ** m
        return s.invert() ** (-m)


def tqft_value(spec, g, colors):
    """TQFT value on normalized idempotents: the displayed case split."""
    if len(colors) == 0:
        acc = None
        for i in range(spec.dim):
            term = spec.delta_power(i, 2 * (g - 1))
            acc = term if acc is None else acc + term
        return acc
    first = colors[0]
    if any(c != first for c in colors):
        return PuiseuxSeries.zero(spec.param)
    return spec.delta_power(first, 2 * g - 2 + len(colors))


def leg_series(spec, vector_normalized, psi_weight, bound):
    """The leg insertion A(psi) v in normalized coordinates, times psi^w.

    Returns {psi power p: component list over colors}.
    """
    A = spec.R.orders
    out = {}
    for p in range(0, bound + 1 - psi_weight):
        if p < len(A):
            comp = A[p].apply(vector_normalized)
            out[p + psi_weight] = comp
    return out


def edge_series(spec, bound):
    """The edge bivector coefficients B[p][q] (matrices over colors).

    B(psi1, psi2) = (A(psi1) A(psi2)^t - Id) / (-(psi1 + psi2)); exactness of
    the division is the symplectic condition and is verified.
    """
    n = spec.dim
    param = spec.param
    A = spec.R.orders
    K = len(A) - 1

    def N(p, q):
        if p > K or q > K:
            return None
        mat = A[p] * A[q].transpose()
        if p == 0 and q == 0:
            mat = mat - SeriesMatrix.identity(n, param)
        return mat

    B = {}
    for s in range(0, bound + 1):
        # solve N_{p,q} = -(B_{p-1,q} + B_{p,q-1}) for B of total degree s
        for i in range(0, s + 1):
            p, q = s - i, i
            val = N(p + 1, q)
            if val is None:
                continue
            acc = -val
            if i >= 1 and (p + 1, q - 1) in B:
                acc = acc - B[(p + 1, q - 1)]
            B[(p, q)] = acc
        # consistency: N_{0,s+1} = -(B_{-1,s+1} + B_{0,s})
        check = N(0, s + 1)
        if check is not None and (0, s) in B:
            resid = check + B[(0, s)]
            if not resid.is_zero():
                raise ChartError("edge bivector not divisible: "
                                 "broken symplectic condition at degree %d" % s)
    return B


def dilaton_leaf(spec, bound):
    """T(psi) = psi (Id - A(psi)) v as {power: component list}; O(psi^2)."""
    cache = getattr(spec, "_leaf_cache", None)
    if cache is not None and cache[0] >= bound:
        return {p: c for p, c in cache[1].items() if p <= bound}
    A = spec.R.orders
    v = spec.dilaton_vector
    n = spec.dim
    # psi^1 term: (Id - A[0]) v = 0
    first = [v[i] - A[0].apply(v)[i] for i in range(n)]
    if any(not c.is_zero() for c in first):
        raise ChartError("dilaton leaf has a nonzero psi^1 term")
    out = {}
    for p in range(2, bound + 1):
        if p - 1 < len(A):
            comp = A[p - 1].apply(v)
            if any(not c.is_zero() for c in comp):
                out[p] = [-c for c in comp]
    spec._leaf_cache = (bound, out)
    return out


def _push_extras(powers, gv, nmark):
    """pi_* of prod psi^(b_l) at len(powers) extra points: {kappa tuple: coeff}.

    Iterated one-point rule with the kappa comparison; all b_l >= 1 so no
    string terms arise.
    """
    state = {(): Fraction(1)}
    remaining = len(powers)
    for b in reversed(powers):
        remaining -= 1
        new = {}
        for kap, coeff in state.items():
            kap_list = list(kap)
            m = len(kap_list)
            for mask in itertools.product([0, 1], repeat=m):
                taken = [kap_list[i] for i in range(m) if mask[i]]
                kept = tuple(kap_list[i] for i in range(m) if not mask[i])
                B = b + sum(taken)
                if B == 1:
                    factor = 2 * gv - 2 + nmark + remaining
                    key = tuple(sorted(kept))
                    val = coeff * factor
                else:
                    key = tuple(sorted(kept + ((B - 1),)))
                    val = coeff
                new[key] = new.get(key, Fraction(0)) + val
        state = {k: v for k, v in new.items() if v != 0}
    return state


def vertex_contributions(spec, gv, nmark, color, budget):
    """k-summed local vertex terms: {(extra codim, kappa tuple): series}.

    The extra codim of a k-tuple (b_1..b_k) is sum(b_l) - k >= k; together
    with T = O(psi^2) this makes the k-sum finite at every budget.
    """
    cache = getattr(spec, "_vertex_cache", None)
    if cache is None:
        cache = {}
        spec._vertex_cache = cache
    key = (gv, nmark, color, budget)
    if key in cache:
        return cache[key]
    T = dilaton_leaf(spec, budget + 1)
    out = {}
    base = 2 * gv - 2 + nmark
    for k in range(0, budget + 1):
        for combo in itertools.product(sorted(T), repeat=k):
            extra = sum(combo) - k
            if extra > budget:
                continue
            coeff = PuiseuxSeries.const(Fraction(1, _fact(k)), spec.param)
            for b in combo:
                coeff = coeff * T[b][color]
            coeff = coeff * spec.delta_power(color, base + k)
            if coeff.is_zero():
                continue
            for kap, rat in _push_extras(list(combo), gv, nmark).items():
                okey = (extra, kap)
                prev = out.get(okey)
                term = coeff * rat
                out[okey] = term if prev is None else prev + term
        if not T and k >= 0:
            break
    cache[key] = out
    return out


def _fact(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def to_normalized_insertion(frame, flat_vector, psi_weight=0, trunc=None):
    """Convert a flat vector (rationals or series) into normalized coords."""
    param = frame.param
    vec = [c if isinstance(c, PuiseuxSeries) else PuiseuxSeries.const(c, param)
           for c in flat_vector]
    return (frame.to_normalized(vec), psi_weight)


def reconstruct_class(spec, g, n, insertions, codim_bound):
    """The reconstruction as a StrataVector with Puiseux-series coefficients.

    ``insertions`` is a list of (normalized-coordinate vector, psi weight),
    one per marking; see ``to_normalized_insertion``.
    """
    if len(insertions) != n:
        raise ValueError("expected %d insertions" % n)
    dim = 3 * g - 3 + n
    bound = min(codim_bound, dim)
    N = spec.dim
    param = spec.param
    legs_data = [leg_series(spec, v, w, bound) for v, w in insertions]
    B = edge_series(spec, bound)
    result = StrataVector(g, n)
    for graph in enumerate_stable_graphs(g, n, bound):
        E = len(graph.edges)
        aut = graph.aut_order()
        nv = graph.num_vertices
        markings = [graph.vertex_markings(v) for v in range(nv)]
        # prepare decoration slots
        leg_slots = [mk[1] for v in range(nv) for mk in markings[v]
                     if mk[0] == "leg"]
        budget = bound - E
        # iterate psi assignments for legs and edge sides
        leg_choices = {}
        for label in leg_slots:
            leg_choices[label] = sorted(legs_data[label - 1].keys())
        edge_items = list(range(E))
        for leg_assign in _bounded_assignments(
                [leg_choices[l] for l in sorted(leg_slots)], budget):
            leg_psi = dict(zip(sorted(leg_slots), leg_assign))
            rem1 = budget - sum(leg_assign)
            for edge_assign in _bounded_assignments(
                    [sorted({p for p, q in B}) for _ in edge_items] +
                    [sorted({q for p, q in B}) for _ in edge_items], rem1):
                ps = edge_assign[:E]
                qs = edge_assign[E:]
                used = sum(ps) + sum(qs)
                rem2 = rem1 - used
                if rem2 < 0:
                    continue
                # per-vertex budgets are coupled only through rem2
                _accumulate_graph_terms(spec, result, graph, markings, aut,
                                        legs_data, B, leg_psi, ps, qs, rem2,
                                        g, n, bound)
    return result.drop_above_codim(bound)


def _bounded_assignments(choice_lists, budget):
    """Cartesian product of sorted int lists with total <= budget."""
    if not choice_lists:
        yield ()
        return
    first = choice_lists[0]
    for x in first:
        if x > budget:
            break
        for rest in _bounded_assignments(choice_lists[1:], budget - x):
            yield (x,) + rest


def _accumulate_graph_terms(spec, result, graph, markings, aut, legs_data, B,
                            leg_psi, ps, qs, rem, g, n, bound):
    nv = graph.num_vertices
    N = spec.dim
    param = spec.param
    E = len(graph.edges)
    base_codim = E + sum(leg_psi.values()) + sum(ps) + sum(qs)
    for coloring in itertools.product(range(N), repeat=nv):
        # scalar factor from legs and edges for this coloring
        factor = PuiseuxSeries.const(Fraction(1, aut), param)
        ok = True
        for v in range(nv):
            for mk in markings[v]:
                if mk[0] == "leg":
                    label = mk[1]
                    comp = legs_data[label - 1].get(leg_psi[label])
                    if comp is None:
                        ok = False
                        break
                    factor = factor * comp[coloring[v]]
            if not ok:
                break
        if not ok:
            continue
        for idx, (a, b) in enumerate(graph.edges):
            mat = B.get((ps[idx], qs[idx]))
            if mat is None:
                ok = False
                break
            factor = factor * mat.entries[coloring[a]][coloring[b]]
        if not ok or factor.is_zero():
            continue
        # vertex k-sums
        vertex_terms = []
        for v in range(nv):
            contribs = vertex_contributions(spec, graph.genera[v],
                                            len(markings[v]), coloring[v], rem)
            vertex_terms.append(sorted(contribs.items()))
        for combo in itertools.product(*vertex_terms):
            extra = sum(key[0] for key, _ in combo)
            if extra > rem:
                continue
            coeff = factor
            for _, series in combo:
                coeff = coeff * series
            if coeff.is_zero():
                continue
            kappa = [key[1] for key, _ in combo]
            edge_psi = [(ps[i], qs[i]) for i in range(E)]
            dg = DecoratedGraph(graph, leg_psi, edge_psi, kappa)
            if dg.codim() <= bound:
                if dg in result.terms:
                    acc = result.terms[dg] + coeff
                    if acc.is_zero():
                        del result.terms[dg]
                    else:
                        result.terms[dg] = acc
                else:
                    result.terms[dg] = coeff


# ---------------------------------------------------------------------------
# dilaton shift and dimension extension


def dilaton_shift(spec, g, n, insertions, codim_bound, v_flat, v_degree):
    """The shifted class: extra psi*v legs summed with 1/k!, pushed forward.

    ``v_flat`` is a flat vector with MultiPoly/series entries (typically
    formal symbols); the k-sum is truncated at ``v_degree`` extra legs.
    """
    frame = spec.frame
    v_norm, _ = to_normalized_insertion(frame, v_flat)
    total = reconstruct_class(spec, g, n, insertions, codim_bound)
    for k in range(1, v_degree + 1):
        extra = insertions + [(v_norm, 1)] * k
        cls = reconstruct_class(spec, g, n + k, extra, codim_bound + k)
        for _ in range(k):
            cls = forgetful_pushforward(cls)
        total = total + cls.scale(Fraction(1, _fact(k))).drop_above_codim(
            min(codim_bound, 3 * g - 3 + n))
    return total


# ---------------------------------------------------------------------------
# genus one


def genus_one_correlator(spec, flat_field):
    """The genus-one one-form evaluated on a flat field:

        dG(X) = (1/48) sum_i dlog(Delta_i)(X) + 1/2 sum_i r_ii du_i(X),

    where the r_ii are the negatives of the diagonal entries of the z^1-term
    of the flatness solution (they solve the rotation-coefficient equation
    dr_ii = (1/4) sum_j dlog(Delta_j)/du_i dlog(Delta_i)/du_j (du_j - du_i),
    which the tests verify).  The value equals the integral of the
    reconstructed (1,1)-class, checked on several charts.
    """
    frame = spec.frame
    exp = frame.expansion
    param = frame.param
    X = [c if isinstance(c, PuiseuxSeries) else PuiseuxSeries.const(c, param)
         for c in flat_field]
    total = PuiseuxSeries.zero(param)
    for i in range(frame.dim):
        dlog = exp.derivative_along(frame.delta[i], X) * frame.delta_inv[i]
        total = total + dlog * Fraction(1, 48)
        du_i = sum((frame._einv.entries[i][mu] * X[mu] for mu in range(frame.dim)),
                   PuiseuxSeries.zero(param))
        total = total - spec.R[1].entries[i][i] * du_i * Fraction(1, 2)
    return total


def integrate_reconstruction(vector):
    """Integrate a series-coefficient StrataVector of top codimension."""
    from .intersect import kappa_psi_integral
    total = None
    dim = 3 * vector.g - 3 + vector.n
    for dg, coeff in vector.terms.items():
        if dg.codim() != dim:
            continue
        value = Fraction(1)
        graph = dg.graph
        for v in range(graph.num_vertices):
            exps = []
            for mk in graph.vertex_markings(v):
                if mk[0] == "leg":
                    exps.append(dg.leg_exponent(mk[1]))
                else:
                    exps.append(dg.edge_psi[mk[1]][mk[2]])
            value *= kappa_psi_integral(graph.genera[v], exps, dg.kappa[v])
        term = coeff * value
        total = term if total is None else total + term
    if total is None:
        return Fraction(0)
    return total
