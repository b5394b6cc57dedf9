"""Stable graphs, psi/kappa decorations, and strata-algebra operations.

A basis element of the strata algebra is a decorated stable graph: the
pushforward under the gluing map of a product of psi-powers at markings and
half-edges and kappa-monomials at vertices, with NO automorphism prefactor.
All 1/|Aut| factors belong to reconstruction coefficients.

The kappa convention is kappa_a = pi_*(psi^(a+1)) at a forgotten point.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def _is_zero(c):
    if isinstance(c, Fraction):
        return c == 0
    if isinstance(c, int):
        return c == 0
    return c.is_zero()


class StableGraph:
    """Connected stable dual graph with labeled legs, in canonical form."""

    __slots__ = ("genera", "legs", "edges", "_aut")

    def __init__(self, genera, legs, edges, _canonical=False):
        genera = tuple(int(g) for g in genera)
        legs = tuple(tuple(sorted(l)) for l in legs)
        edges = tuple(sorted((min(u, v), max(u, v)) for u, v in edges))
        if not _canonical:
            genera, legs, edges, _ = _canonical_labeling(genera, legs, edges)
        self.genera = genera
        self.legs = legs
        self.edges = edges
        self._aut = None

    # -- structure -----------------------------------------------------------

    @property
    def num_vertices(self):
        return len(self.genera)

    def genus(self):
        v, e = len(self.genera), len(self.edges)
        return sum(self.genera) + e - v + 1

    def num_legs(self):
        return sum(len(l) for l in self.legs)

    def valence(self, v):
        val = len(self.legs[v])
        for a, b in self.edges:
            val += (a == v) + (b == v)
        return val

    def vertex_markings(self, v):
        """Deterministic marking list of the vertex moduli space.

        Entries are ('leg', label) and ('edge', edge_index, side).
        """
        out = [("leg", l) for l in self.legs[v]]
        for idx, (a, b) in enumerate(self.edges):
            if a == v:
                out.append(("edge", idx, 0))
            if b == v:
                out.append(("edge", idx, 1))
        return out

    def is_stable(self):
        if self.genus() < 0:
            return False
        for v, g in enumerate(self.genera):
            if g < 0 or 2 * g - 2 + self.valence(v) <= 0:
                return False
        return _connected(len(self.genera), self.edges)

    def aut_order(self):
        """|Aut|: vertex symmetries times parallel-edge and loop factors."""
        if self._aut is None:
            n_sigma = 0
            for p in _label_preserving_perms(self.genera, self.legs):
                if _apply_edges(self.edges, p) == self.edges:
                    n_sigma += 1
            factor = 1
            mult = {}
            for e in self.edges:
                mult[e] = mult.get(e, 0) + 1
            for (a, b), m in mult.items():
                factor *= _fact(m)
                if a == b:
                    factor *= 2 ** m
            self._aut = n_sigma * factor
        return self._aut

    def key(self):
        return (self.genera, self.legs, self.edges)

    def __eq__(self, other):
        return isinstance(other, StableGraph) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "StableGraph(g=%s, legs=%s, edges=%s)" % (self.genera, self.legs,
                                                         list(self.edges))


def _fact(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _connected(nv, edges):
    if nv == 1:
        return True
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in range(nv)}) == 1


def _label_preserving_perms(genera, legs):
    """All vertex permutations preserving genus and the exact leg sets."""
    nv = len(genera)
    classes = {}
    for v in range(nv):
        classes.setdefault((genera[v], legs[v]), []).append(v)
    groups = list(classes.values())
    perms_per_group = [list(itertools.permutations(g)) for g in groups]
    for combo in itertools.product(*perms_per_group):
        p = [None] * nv
        for group, image in zip(groups, combo):
            for src, dst in zip(group, image):
                p[src] = dst
        yield tuple(p)


def _apply_edges(edges, p):
    return tuple(sorted((min(p[a], p[b]), max(p[a], p[b])) for a, b in edges))


def _canonical_labeling(genera, legs, edges):
    """Canonical vertex labeling; returns (genera, legs, edges, coset).

    The coset lists every permutation old->new that achieves the canonical
    form; it is used to canonicalize decorations.
    """
    nv = len(genera)
    order = sorted(range(nv), key=lambda v: (genera[v], legs[v]))
    base = [None] * nv
    for new, old in enumerate(order):
        base[old] = new
    best = None
    coset = []
    for p in _label_preserving_perms(tuple(genera[v] for v in order),
                                     tuple(legs[v] for v in order)):
        full = tuple(p[base[v]] for v in range(nv))
        e = _apply_edges(edges, full)
        if best is None or e < best:
            best = e
            coset = [full]
        elif e == best:
            coset.append(full)
    new_genera = [0] * nv
    new_legs = [()] * nv
    p0 = coset[0]
    for v in range(nv):
        new_genera[p0[v]] = genera[v]
        new_legs[p0[v]] = tuple(sorted(legs[v]))
    return tuple(new_genera), tuple(new_legs), best, coset


# ---------------------------------------------------------------------------


class DecoratedGraph:
    """Stable graph with psi-exponents on legs/half-edges and vertex kappas."""

    __slots__ = ("graph", "leg_psi", "edge_psi", "kappa", "_key")

    def __init__(self, graph, leg_psi=None, edge_psi=None, kappa=None,
                 _canonical=False):
        self.graph = graph
        leg_psi = dict(leg_psi or {})
        self.leg_psi = tuple(sorted((l, e) for l, e in leg_psi.items() if e))
        edge_psi = list(edge_psi or [(0, 0)] * len(graph.edges))
        kappa = list(kappa or [()] * graph.num_vertices)
        if not _canonical:
            edge_psi, kappa = _canonical_decoration(graph, edge_psi, kappa)
        self.edge_psi = tuple(tuple(x) for x in edge_psi)
        self.kappa = tuple(tuple(sorted(k)) for k in kappa)
        self._key = (graph.key(), self.leg_psi, self.edge_psi, self.kappa)

    def codim(self):
        total = len(self.graph.edges)
        total += sum(e for _, e in self.leg_psi)
        total += sum(a + b for a, b in self.edge_psi)
        total += sum(sum(k) for k in self.kappa)
        return total

    def leg_exponent(self, label):
        for l, e in self.leg_psi:
            if l == label:
                return e
        return 0

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, DecoratedGraph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return ("Stratum(%r, leg_psi=%s, edge_psi=%s, kappa=%s)"
                % (self.graph, self.leg_psi, self.edge_psi, self.kappa))

    @staticmethod
    def smooth(g, n, leg_psi=None, kappa=()):
        graph = StableGraph([g], [tuple(range(1, n + 1))], [])
        return DecoratedGraph(graph, leg_psi=leg_psi, kappa=[tuple(kappa)])


def _canonical_decoration(graph, edge_psi, kappa):
    """Minimal decoration encoding over the graph's automorphism coset."""
    genera, legs, edges = graph.genera, graph.legs, graph.edges
    _, _, _, coset = _canonical_labeling(genera, legs, edges)
    best = None
    for p in coset:
        new_kappa = [None] * len(genera)
        for v in range(len(genera)):
            new_kappa[p[v]] = tuple(sorted(kappa[v]))
        moved = []
        for (a, b), (xa, xb) in zip(edges, edge_psi):
            na, nb = p[a], p[b]
            if na > nb:
                na, nb, xa, xb = nb, na, xb, xa
            if na == nb and xa > xb:
                xa, xb = xb, xa
            moved.append(((na, nb), (xa, xb)))
        moved.sort()
        new_edges = tuple(e for e, _ in moved)
        assert new_edges == edges
        enc = (tuple(x for _, x in moved), tuple(new_kappa))
        if best is None or enc < best:
            best = enc
    return list(best[0]), list(best[1])


# ---------------------------------------------------------------------------


class StrataVector:
    """Formal linear combination of decorated graphs of fixed (g, n)."""

    __slots__ = ("g", "n", "terms")

    def __init__(self, g, n, terms=None):
        self.g = g
        self.n = n
        self.terms = {}
        if terms:
            for dg, c in (terms.items() if isinstance(terms, dict) else terms):
                if _is_zero(c):
                    continue
                if dg in self.terms:
                    acc = self.terms[dg] + c
                    if _is_zero(acc):
                        del self.terms[dg]
                    else:
                        self.terms[dg] = acc
                else:
                    self.terms[dg] = c

    @staticmethod
    def zero(g, n):
        return StrataVector(g, n)

    @staticmethod
    def single(dg, coeff=Fraction(1)):
        return StrataVector(dg.graph.genus(), dg.graph.num_legs(), {dg: coeff})

    def __add__(self, other):
        assert (self.g, self.n) == (other.g, other.n)
        terms = dict(self.terms)
        for dg, c in other.terms.items():
            if dg in terms:
                acc = terms[dg] + c
                if _is_zero(acc):
                    del terms[dg]
                else:
                    terms[dg] = acc
            else:
                terms[dg] = c
        out = StrataVector(self.g, self.n)
        out.terms = terms
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        out = StrataVector(self.g, self.n)
        for dg, coeff in self.terms.items():
            val = coeff * c
            if not _is_zero(val):
                out.terms[dg] = val
        return out

    def map_coeff(self, fn):
        out = StrataVector(self.g, self.n)
        for dg, coeff in self.terms.items():
            val = fn(coeff)
            if not _is_zero(val):
                out.terms[dg] = val
        return out

    def is_zero(self):
        return not self.terms

    def drop_above_codim(self, bound):
        out = StrataVector(self.g, self.n)
        out.terms = {dg: c for dg, c in self.terms.items() if dg.codim() <= bound}
        return out

    def codim_part(self, d):
        out = StrataVector(self.g, self.n)
        out.terms = {dg: c for dg, c in self.terms.items() if dg.codim() == d}
        return out

    def __repr__(self):
        return "StrataVector(g=%d, n=%d, %d terms)" % (self.g, self.n,
                                                       len(self.terms))


# ---------------------------------------------------------------------------
# enumeration


def enumerate_stable_graphs(g, n, max_edges):
    """All stable graphs of type (g, n) with at most max_edges edges."""
    if 2 * g - 2 + n <= 0:
        raise ValueError("(g, n) = (%d, %d) is unstable" % (g, n))
    out = {}
    max_vertices = max(1, 2 * g - 2 + n)
    for nv in range(1, max_vertices + 1):
        for ne in range(nv - 1, max_edges + 1):
            h1 = ne - nv + 1
            if h1 < 0 or sum_genus_bound(g, h1) < 0:
                continue
            total_genus = g - h1
            if total_genus < 0:
                continue
            for genera in _compositions(total_genus, nv):
                pairs = [(i, j) for i in range(nv) for j in range(i, nv)]
                for edge_combo in itertools.combinations_with_replacement(pairs, ne):
                    if not _connected(nv, edge_combo):
                        continue
                    for assignment in itertools.product(range(nv), repeat=n):
                        legs = [[] for _ in range(nv)]
                        for label, v in enumerate(assignment, start=1):
                            legs[v].append(label)
                        graph = StableGraph(genera, legs, edge_combo)
                        if graph.is_stable():
                            out.setdefault(graph.key(), graph)
    return sorted(out.values(), key=lambda gr: (len(gr.edges), gr.key()))


def sum_genus_bound(g, h1):
    return g - h1


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_decorated_basis(g, n, codim):
    """All decorated graphs of the given codimension, canonical and sorted."""
    out = {}
    for graph in enumerate_stable_graphs(g, n, codim):
        rest = codim - len(graph.edges)
        if rest < 0:
            continue
        legs = sorted(l for ls in graph.legs for l in ls)
        slots = len(legs)
        edge_sides = [(idx, side) for idx in range(len(graph.edges))
                      for side in (0, 1)]
        nv = graph.num_vertices
        for leg_part in _compositions_bounded(rest, slots):
            rest2 = rest - sum(leg_part)
            for side_part in _compositions_bounded(rest2, len(edge_sides)):
                rest3 = rest2 - sum(side_part)
                for kappa_combo in _kappa_assignments(rest3, nv):
                    leg_psi = {l: e for l, e in zip(legs, leg_part) if e}
                    edge_psi = [[0, 0] for _ in graph.edges]
                    for (idx, side), e in zip(edge_sides, side_part):
                        edge_psi[idx][side] = e
                    dg = DecoratedGraph(graph, leg_psi, edge_psi, kappa_combo)
                    if dg.codim() == codim:
                        out.setdefault(dg.key(), dg)
    return sorted(out.values(), key=lambda d: d.key())


def _compositions_bounded(maxtotal, parts):
    """All tuples of nonnegative ints of length parts with sum <= maxtotal."""
    if parts == 0:
        yield ()
        return
    for first in range(maxtotal + 1):
        for rest in _compositions_bounded(maxtotal - first, parts - 1):
            yield (first,) + rest


def _kappa_assignments(total, nv):
    """All ways to attach kappa-monomials of total degree == total."""
    if nv == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for part in _partitions(first):
            for rest in _kappa_assignments(total - first, nv - 1):
                yield (tuple(part),) + rest


def _partitions(total, minpart=1):
    if total == 0:
        yield ()
        return
    for first in range(minpart, total + 1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# strata-algebra module actions


def multiply_psi(vector, leg_label, power=1):
    """Multiply by psi_i^power: adds to the exponent of the leg."""
    dim = 3 * vector.g - 3 + vector.n
    out = StrataVector(vector.g, vector.n)
    for dg, c in vector.terms.items():
        if dg.codim() + power > dim:
            continue
        leg_psi = dict(dg.leg_psi)
        leg_psi[leg_label] = leg_psi.get(leg_label, 0) + power
        new = DecoratedGraph(dg.graph, leg_psi, dg.edge_psi, dg.kappa)
        out = out + StrataVector.single(new, c)
    return out


def multiply_kappa(vector, a):
    """Multiply by kappa_a; on a graph this distributes over the vertices."""
    if a == 0:
        return vector.scale(2 * vector.g - 2 + vector.n)
    dim = 3 * vector.g - 3 + vector.n
    out = StrataVector(vector.g, vector.n)
    for dg, c in vector.terms.items():
        if dg.codim() + a > dim:
            continue
        for v in range(dg.graph.num_vertices):
            kappa = [list(k) for k in dg.kappa]
            kappa[v].append(a)
            new = DecoratedGraph(dg.graph, dict(dg.leg_psi), dg.edge_psi, kappa)
            out = out + StrataVector.single(new, c)
    return out


def multiply_psi_vertex(dg, coeff, vertex, marking, power):
    """psi-multiplication at a vertex marking ('leg', l) or ('edge', i, s)."""
    if power == 0:
        return StrataVector.single(dg, coeff)
    if marking[0] == "leg":
        leg_psi = dict(dg.leg_psi)
        leg_psi[marking[1]] = leg_psi.get(marking[1], 0) + power
        return StrataVector.single(
            DecoratedGraph(dg.graph, leg_psi, dg.edge_psi, dg.kappa), coeff)
    _, idx, side = marking
    edge_psi = [list(x) for x in dg.edge_psi]
    edge_psi[idx][side] += power
    return StrataVector.single(
        DecoratedGraph(dg.graph, dict(dg.leg_psi), edge_psi, dg.kappa), coeff)


# ---------------------------------------------------------------------------
# gluing pushforward (grafting local classes into a stable graph)


def gluing_pushforward(graph, vertex_vectors):
    """Graft per-vertex StrataVectors into ``graph``; flattens composites.

    ``vertex_vectors[v]`` is a StrataVector on (g_v, n_v) whose markings
    1..n_v correspond, in order, to ``graph.vertex_markings(v)``.
    """
    g, n = graph.genus(), graph.num_legs()
    out = StrataVector(g, n)
    nv = graph.num_vertices
    for combo in itertools.product(*[list(vertex_vectors[v].terms.items())
                                     for v in range(nv)]):
        coeff = None
        for _, c in combo:
            coeff = c if coeff is None else coeff * c
        inner = [dg for dg, _ in combo]
        flat = _flatten(graph, inner)
        out = out + StrataVector.single(flat, coeff)
    return out


def _flatten(graph, inner):
    """One decorated graph per vertex -> a single decorated graph."""
    genera = []
    legs = []
    kappa = []
    vmap = {}  # (outer vertex, inner vertex) -> new index
    for v in range(graph.num_vertices):
        for w in range(inner[v].graph.num_vertices):
            vmap[(v, w)] = len(genera)
            genera.append(inner[v].graph.genera[w])
            legs.append([])
            kappa.append(list(inner[v].kappa[w]))
    # inner marking l of vertex v -> (new vertex index, psi exponent)
    marking_info = {}
    for v in range(graph.num_vertices):
        dg = inner[v]
        for w, ls in enumerate(dg.graph.legs):
            for l in ls:
                marking_info[(v, l)] = (vmap[(v, w)], dg.leg_exponent(l))
    edges = []
    edge_psi = []
    for v in range(graph.num_vertices):
        dg = inner[v]
        for (a, b), (xa, xb) in zip(dg.graph.edges, dg.edge_psi):
            na, nb = vmap[(v, a)], vmap[(v, b)]
            if na <= nb:
                edges.append((na, nb))
                edge_psi.append((xa, xb))
            else:
                edges.append((nb, na))
                edge_psi.append((xb, xa))
    # outer legs and edges attach through the ordered vertex markings
    leg_psi = {}
    for v in range(graph.num_vertices):
        for local_label, mk in enumerate(graph.vertex_markings(v), start=1):
            nv_, psi = marking_info[(v, local_label)]
            if mk[0] == "leg":
                legs[nv_].append(mk[1])
                if psi:
                    leg_psi[mk[1]] = psi
    for idx, (a, b) in enumerate(graph.edges):
        side_info = []
        for side, v in enumerate((a, b)):
            local_label = next(i for i, mk in
                               enumerate(graph.vertex_markings(v), start=1)
                               if mk == ("edge", idx, side))
            side_info.append(marking_info[(v, local_label)])
        (va, xa), (vb, xb) = side_info
        if va <= vb:
            edges.append((va, vb))
            edge_psi.append((xa, xb))
        else:
            edges.append((vb, va))
            edge_psi.append((xb, xa))
    return _rebuild(genera, legs, edges, leg_psi, edge_psi, kappa)


# ---------------------------------------------------------------------------
# forgetful pushforward


def forgetful_pushforward(vector, leg_label=None):
    """Push forward along the map forgetting one leg (default: the last)."""
    if leg_label is None:
        leg_label = vector.n
    out = StrataVector(vector.g, vector.n - 1)
    for dg, c in vector.terms.items():
        out = out + _forget_one(dg, c, leg_label, vector.g, vector.n)
    return out


def _forget_one(dg, coeff, leg_label, g, n):
    graph = dg.graph
    v = next(i for i in range(graph.num_vertices) if leg_label in graph.legs[i])
    b = dg.leg_exponent(leg_label)
    gv = graph.genera[v]
    val = graph.valence(v)
    out = StrataVector(g, n - 1)
    if 2 * gv - 2 + (val - 1) <= 0:
        # the vertex contracts; any decoration on its point-moduli kills it
        if b > 0:
            return out
        term = _drop_leg(dg, v, leg_label, [list(k) for k in dg.kappa])
        if term is not None:
            out = out + term.scale(coeff)
        return out
    # stable vertex: expand each kappa over kappa^up = pi^* kappa + psi^b
    kappas = list(dg.kappa[v])
    for subset in itertools.product([0, 1], repeat=len(kappas)):
        taken = [k for k, s in zip(kappas, subset) if s]
        kept = [k for k, s in zip(kappas, subset) if not s]
        B = b + sum(taken)
        if B == 0:
            # string case: lower one other psi at this vertex
            for st in _string_terms(dg, coeff, v, leg_label, kept):
                out = out + st
        else:
            # kappa_{B-1} at the vertex; kappa_0 is the scalar 2g-2+(val-1)
            new_kappa = [list(k) for k in dg.kappa]
            new_kappa[v] = kept
            factor = coeff
            if B == 1:
                factor = factor * (2 * gv - 2 + (val - 1))
            else:
                new_kappa[v] = kept + [B - 1]
            term = _drop_leg(dg, v, leg_label, new_kappa)
            if term is not None:
                out = out + term.scale(factor)
    return out


def _string_terms(dg, coeff, v, leg_label, kept_kappa):
    graph = dg.graph
    new_kappa = [list(k) for k in dg.kappa]
    new_kappa[v] = list(kept_kappa)
    for mk in graph.vertex_markings(v):
        if mk == ("leg", leg_label):
            continue
        if mk[0] == "leg":
            e = dg.leg_exponent(mk[1])
            if e >= 1:
                leg_psi = dict(dg.leg_psi)
                leg_psi[mk[1]] = e - 1
                lowered = DecoratedGraph(graph, leg_psi, dg.edge_psi,
                                         [tuple(k) for k in new_kappa])
                term = _drop_leg(lowered, v, leg_label, new_kappa)
                if term is not None:
                    yield term.scale(coeff)
        else:
            _, idx, side = mk
            e = dg.edge_psi[idx][side]
            if e >= 1:
                edge_psi = [list(x) for x in dg.edge_psi]
                edge_psi[idx][side] = e - 1
                lowered = DecoratedGraph(graph, dict(dg.leg_psi), edge_psi,
                                         [tuple(k) for k in new_kappa])
                term = _drop_leg(lowered, v, leg_label, new_kappa)
                if term is not None:
                    yield term.scale(coeff)


def _drop_leg(dg, v, leg_label, kappa_override=None):
    """Remove the leg; stabilize if the vertex becomes unstable."""
    graph = dg.graph
    kappa = kappa_override if kappa_override is not None else [list(k) for k in dg.kappa]
    legs = [list(l) for l in graph.legs]
    legs[v].remove(leg_label)
    leg_psi = {l: e for l, e in dg.leg_psi if l != leg_label}
    # relabel legs above the forgotten one
    legs = [[l - 1 if l > leg_label else l for l in ls] for ls in legs]
    leg_psi = {(l - 1 if l > leg_label else l): e for l, e in leg_psi.items()}
    gv = graph.genera[v]
    val = len(legs[v]) + sum((a == v) + (b == v) for a, b in graph.edges)
    if 2 * gv - 2 + val > 0:
        return StrataVector.single(
            _rebuild(graph.genera, legs, graph.edges, leg_psi, dg.edge_psi, kappa))
    # unstable: only the (0, {x, y}) configuration can occur after one removal
    if gv != 0 or val != 2 or kappa[v]:
        return None
    return _contract_vertex(graph, legs, leg_psi, dg.edge_psi, kappa, v)


def _rebuild(genera, legs, edges, leg_psi, edge_psi, kappa):
    can_g, can_l, can_e, coset = _canonical_labeling(
        tuple(genera), tuple(tuple(sorted(l)) for l in legs), tuple(edges))
    p = coset[0]
    nv = len(genera)
    new_kappa = [None] * nv
    for v in range(nv):
        new_kappa[p[v]] = tuple(sorted(kappa[v]))
    moved = []
    for (a, b), (xa, xb) in zip(edges, edge_psi):
        na, nb = p[a], p[b]
        if na > nb:
            na, nb, xa, xb = nb, na, xb, xa
        moved.append(((na, nb), (xa, xb)))
    moved.sort(key=lambda t: t[0])
    out_graph = StableGraph.__new__(StableGraph)
    out_graph.genera = can_g
    out_graph.legs = can_l
    out_graph.edges = can_e
    out_graph._aut = None
    return DecoratedGraph(out_graph, leg_psi, [x for _, x in moved], new_kappa)


def _contract_vertex(graph, legs, leg_psi, edge_psi, kappa, v):
    """Contract an unstable genus-0 valence-2 vertex with no decorations."""
    attach = []  # ('leg', label, psi) or ('vertex', w, psi)
    new_edges = []
    new_edge_psi = []
    for (a, b), (xa, xb) in zip(graph.edges, edge_psi):
        if a == v and b == v:
            return None  # would need a genus bump; cannot occur after 1 removal
        if a == v:
            if xa:
                return None  # decorated dying half-edge: excluded by stability
            attach.append((b, xb))
        elif b == v:
            if xb:
                return None
            attach.append((a, xa))
        else:
            new_edges.append((a, b))
            new_edge_psi.append((xa, xb))
    hanging_legs = [(l, leg_psi.get(l, 0)) for l in legs[v]]
    if len(attach) + len(hanging_legs) != 2:
        return None
    if len(attach) == 2:
        (w1, x1), (w2, x2) = attach
        new_edges.append((min(w1, w2), max(w1, w2)))
        new_edge_psi.append((x1, x2) if w1 <= w2 else (x2, x1))
    elif len(attach) == 1 and len(hanging_legs) == 1:
        (w, _xw), (l, xl) = attach[0], hanging_legs[0]
        legs[w].append(l)
        # the half-edge psi at w survives as the leg psi; any psi that sat on
        # the forgotten side or on the leg is zero here by the guards above
        leg_psi = dict(leg_psi)
        leg_psi[l] = attach[0][1]
        if xl:
            return None
    else:
        return None
    genera = [g for i, g in enumerate(graph.genera) if i != v]
    legs = [ls for i, ls in enumerate(legs) if i != v]
    kappa = [k for i, k in enumerate(kappa) if i != v]

    def rn(i):
        return i if i < v else i - 1

    new_edges = [(rn(a), rn(b)) for a, b in new_edges]
    new_edges = [(min(a, b), max(a, b)) for a, b in new_edges]
    return StrataVector.single(
        _rebuild(genera, legs, new_edges, leg_psi, new_edge_psi, kappa))
