"""Tautological relations from pole cancellation along the discriminant.

For each (g, n, codim) cell and each insertion tuple of flat basis fields,
the reconstructed class is a strata vector whose coefficients are exact
Puiseux series in the local parameter; the coefficient row of every negative
exponent (and of every background monomial appearing there) is a relation
vector over Q.  psi-weighted insertions are not needed as generators: a
psi^w-weighted leg multiplies the whole class by psi_j^w, so the closure
under psi/kappa-multiplication generates them.

Closure follows the stability definition: psi/kappa multiplication, leg
relabeling, forgetful pushforward, and grafting into stable graphs of larger
type, iterated to a fixed point within the configured bounds.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .graphs import (DecoratedGraph, StrataVector, enumerate_decorated_basis,
                     enumerate_stable_graphs, forgetful_pushforward,
                     gluing_pushforward, multiply_kappa, multiply_psi)
from .intersect import integrate_against_monomial, smooth_monomial_basis
from .reconstruct import reconstruct_class, to_normalized_insertion


class RelationSet:
    """Per-(g, n, codim) spans of rational strata vectors, kept reduced."""

    def __init__(self, cells):
        self.cells = sorted(cells)
        self.basis = {}
        self.index = {}
        self.rows = {cell: [] for cell in self.cells}      # RREF rows
        self.pivots = {cell: [] for cell in self.cells}
        self.provenance = {cell: [] for cell in self.cells}
        for cell in self.cells:
            g, n, d = cell
            basis = enumerate_decorated_basis(g, n, d)
            self.basis[cell] = basis
            self.index[cell] = {dg.key(): i for i, dg in enumerate(basis)}

    def to_row(self, cell, vector):
        row = [Fraction(0)] * len(self.basis[cell])
        for dg, c in vector.terms.items():
            row[self.index[cell][dg.key()]] = Fraction(c)
        return row

    def add(self, cell, vector, tag=None):
        """Row-reduce a new vector into the cell; True if independent."""
        if vector.is_zero():
            return False
        row = self.to_row(cell, vector)
        rows, pivots = self.rows[cell], self.pivots[cell]
        for idx in range(len(rows)):
            p = pivots[idx]
            if row[p] != 0:
                f = row[p]
                r = rows[idx]
                row = [x - f * y for x, y in zip(row, r)]
        piv = next((i for i, x in enumerate(row) if x != 0), None)
        if piv is None:
            return False
        d = row[piv]
        row = [x / d for x in row]
        for idx in range(len(rows)):
            if rows[idx][piv] != 0:
                f = rows[idx][piv]
                rows[idx] = [x - f * y for x, y in zip(rows[idx], row)]
        rows.append(row)
        pivots.append(piv)
        self.provenance[cell].append(tag)
        return True

    def vectors(self, cell):
        out = []
        for row in self.rows[cell]:
            vec = StrataVector(cell[0], cell[1])
            for i, x in enumerate(row):
                if x:
                    vec.terms[self.basis[cell][i]] = x
            out.append(vec)
        return out

    def dim(self, cell):
        return len(self.rows[cell])

    def contains(self, cell, vector):
        row = self.to_row(cell, vector)
        for r, p in zip(self.rows[cell], self.pivots[cell]):
            if row[p] != 0:
                f = row[p]
                row = [x - f * y for x, y in zip(row, r)]
        return all(x == 0 for x in row)

    def copy(self):
        out = RelationSet(self.cells)
        for cell in self.cells:
            out.rows[cell] = [list(r) for r in self.rows[cell]]
            out.pivots[cell] = list(self.pivots[cell])
            out.provenance[cell] = list(self.provenance[cell])
        return out


def insertion_multisets(dim, n):
    """Unordered insertion tuples of flat basis indices."""
    return list(itertools.combinations_with_replacement(range(dim), n))


def extract_relations(spec, cells, jobs=None):
    """Relations of the CohFT spec on the given (g, n, codim) cells.

    ``jobs`` sets the worker-pool width for the insertion loop; results are
    collected in deterministic order, so the output is pool-size independent.
    """
    rs = RelationSet(cells)
    frame = spec.frame
    by_gn = {}
    for g, n, d in cells:
        by_gn.setdefault((g, n), []).append(d)
    for (g, n), ds in sorted(by_gn.items()):
        dmax = max(ds)
        combos = insertion_multisets(frame.dim, n)

        def job(combo):
            insertions = []
            for mu in combo:
                vec = [Fraction(1) if k == mu else Fraction(0)
                       for k in range(frame.dim)]
                insertions.append(to_normalized_insertion(frame, vec))
            return reconstruct_class(spec, g, n, insertions, dmax)

        if jobs and jobs > 1:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                classes = list(pool.map(job, combos))
        else:
            classes = [job(c) for c in combos]
        for combo, cls in zip(combos, classes):
            for d in ds:
                part = cls.codim_part(d)
                for vector, exponent, mono in polar_vectors(part):
                    tag = ("chart=%s" % frame.expansion.chart.name,
                           "insertion=%s" % (combo,),
                           "exponent=%s" % exponent, "monomial=%s" % (mono,))
                    rs.add((g, n, d), vector, tag)
    return rs


def polar_vectors(vector):
    """Rational strata vectors from the negative-exponent coefficients.

    Yields (StrataVector over Q, exponent, background monomial).  Raises if
    a series cannot certify its polar part.
    """
    slots = {}
    for dg, series in vector.terms.items():
        if series.trunc <= 0:
            raise ValueError(
                "truncation %s cannot certify polar coefficients" % series.trunc)
        for k, poly in series.coeffs.items():
            e = Fraction(k, series.ram)
            if e >= 0:
                continue
            for mono, coeff in poly.terms.items():
                slots.setdefault((e, mono), {})[dg] = coeff
    for (e, mono), terms in sorted(slots.items(),
                                   key=lambda kv: (kv[0][0], str(kv[0][1]))):
        vec = StrataVector(vector.g, vector.n)
        vec.terms = dict(terms)
        yield vec, e, mono


# ---------------------------------------------------------------------------
# closure under the tautological operations


def relabel_legs(vector, perm):
    """Apply a permutation of leg labels; perm maps old label -> new label."""
    out = StrataVector(vector.g, vector.n)
    for dg, c in vector.terms.items():
        graph = dg.graph
        legs = [tuple(perm[l] for l in ls) for ls in graph.legs]
        from .graphs import _rebuild
        new = _rebuild(graph.genera, legs, graph.edges,
                       {perm[l]: e for l, e in dg.leg_psi},
                       dg.edge_psi, [list(k) for k in dg.kappa])
        out = out + StrataVector.single(new, c)
    return out


def close_relations(rs, max_rounds=None):
    """Smallest stable system containing rs, within its cells.

    Worklist closure: every vector added is processed once against all
    operations (adjacent leg transpositions generate the full relabeling
    action on spans, so only those are applied).
    """
    out = rs.copy()
    cells = set(out.cells)
    frontier = [(cell, vec) for cell in out.cells for vec in out.vectors(cell)]
    graph_cache = {}

    def graphs_with(g2, n2, extra):
        key = (g2, n2, extra)
        if key not in graph_cache:
            graph_cache[key] = [gr for gr in enumerate_stable_graphs(g2, n2, extra)
                                if len(gr.edges) == extra]
        return graph_cache[key]

    while frontier:
        cell, vec = frontier.pop()
        g, n, d = cell

        def push(target, vector, tag):
            if target in cells and out.add(target, vector, tag):
                frontier.append((target, vector))

        for i in range(1, n):
            perm = {k: k for k in range(1, n + 1)}
            perm[i], perm[i + 1] = i + 1, i
            push(cell, relabel_legs(vec, perm), ("relabel", i))
        for i in range(1, n + 1):
            push((g, n, d + 1), multiply_psi(vec, i), ("psi", i))
        for a in range(1, max(dd for _, _, dd in cells) - d + 1):
            push((g, n, d + a), multiply_kappa(vec, a), ("kappa", a))
        if (2 * g - 2 + n - 1) > 0 and d >= 1 and n >= 1:
            push((g, n - 1, d - 1), forgetful_pushforward(vec), ("forget",))
        for target in cells:
            g2, n2, d2 = target
            extra = d2 - d
            if extra < 1 or g2 < g or (g2, n2) == (g, n):
                continue
            for graph in graphs_with(g2, n2, extra):
                for glued in _graft_everywhere(graph, vec):
                    push(target, glued, ("glue",))
    return out


def _graft_everywhere(graph, vec):
    """Insert ``vec`` at every matching vertex of ``graph``, in every way."""
    g, n = vec.g, vec.n
    for v in range(graph.num_vertices):
        if graph.genera[v] != g:
            continue
        markings = graph.vertex_markings(v)
        if len(markings) != n:
            continue
        # fundamental classes elsewhere
        others = []
        ok = True
        for w in range(graph.num_vertices):
            if w == v:
                others.append(None)
                continue
            gw = graph.genera[w]
            nw = len(graph.vertex_markings(w))
            if 2 * gw - 2 + nw <= 0:
                ok = False
                break
            others.append(StrataVector.single(DecoratedGraph.smooth(gw, nw)))
        if not ok:
            continue
        for assign in itertools.permutations(range(1, n + 1)):
            relabeled = relabel_legs(vec, {i + 1: assign[i] for i in range(n)})
            vertex_vectors = [relabeled if w == v else others[w]
                              for w in range(graph.num_vertices)]
            yield gluing_pushforward(graph, vertex_vectors)


# ---------------------------------------------------------------------------
# comparison and verification


def compare_spans(rs1, rs2):
    """Per-cell verdicts: 'equal', 'left in right', 'right in left',
    'incomparable'; witnesses are vectors outside the other span."""
    out = {}
    for cell in rs1.cells:
        if cell not in rs2.rows:
            continue
        left_in = all(rs2.contains(cell, v) for v in rs1.vectors(cell))
        right_in = all(rs1.contains(cell, v) for v in rs2.vectors(cell))
        if left_in and right_in:
            out[cell] = ("equal", None)
        elif left_in:
            w = next(v for v in rs2.vectors(cell) if not rs1.contains(cell, v))
            out[cell] = ("left in right", w)
        elif right_in:
            w = next(v for v in rs1.vectors(cell) if not rs2.contains(cell, v))
            out[cell] = ("right in left", w)
        else:
            w = next(v for v in rs1.vectors(cell) if not rs2.contains(cell, v))
            out[cell] = ("incomparable", w)
    return out


def verify_relations(rs):
    """Pair every relation against the partial pairing; report failures.

    Returns {cell: [(row index, monomial, value)]} with nonzero pairings;
    an empty report certifies all pairings vanish.
    """
    failures = {}
    for cell in rs.cells:
        g, n, d = cell
        dim = 3 * g - 3 + n
        monomials = smooth_monomial_basis(g, n, dim - d)
        for ridx, vec in enumerate(rs.vectors(cell)):
            for mono in monomials:
                val = integrate_against_monomial(vec, mono)
                if val != 0:
                    failures.setdefault(cell, []).append((ridx, mono, val))
    return failures


def verify_vector(vector, codim):
    """Pairing report for one vector; list of (monomial, value) nonzero."""
    g, n = vector.g, vector.n
    dim = 3 * g - 3 + n
    out = []
    for mono in smooth_monomial_basis(g, n, dim - codim):
        val = integrate_against_monomial(vector, mono)
        if val != 0:
            out.append((mono, val))
    return out
