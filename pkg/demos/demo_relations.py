"""Tautological relations from pole cancellation, end to end.

Reconstructed classes have exact Laurent coefficients along the discriminant;
the negative-exponent rows are relations.  They pair to exact zero under the
partial pairing, close under the tautological operations, and the closed
spans agree between the base chart and its dimension extensions.
"""

from tautrel.charts import a2_expansion, a2x_a1_expansion
from tautrel.frobenius import idempotent_frame
from tautrel.reconstruct import CohFTSpec
from tautrel.relations import (close_relations, compare_spans,
                               extract_relations, verify_relations)
from tautrel.rmatrix import solve_flatness

CELLS = [(1, 1, 1), (0, 4, 1), (1, 2, 1), (1, 2, 2)]


def span_for(expansion, K=3):
    frame = idempotent_frame(expansion)
    spec = CohFTSpec(frame, solve_flatness(frame, K=K))
    rs = extract_relations(spec, CELLS)
    print("  raw ranks   :", {cell: rs.dim(cell) for cell in CELLS})
    closed = close_relations(rs)
    print("  closed ranks:", {cell: closed.dim(cell) for cell in CELLS})
    failures = verify_relations(closed)
    print("  pairings    :", "all vanish" if not failures else failures)
    return closed


def main():
    print("== base chart")
    base = span_for(a2_expansion(trunc=10))
    print()
    print("\nthe (1,1) relation vectors:")
    for vec in base.vectors((1, 1, 1)):
        for dg, c in vec.terms.items():
            print("   %s * %s" % (c, dg))
        print()
    for c in (1, 2):
        print("== extension by an idempotent direction of norm 1/%d" % c)
        other = span_for(a2x_a1_expansion(c, trunc=10))
        verdicts = compare_spans(base, other)
        print("  span comparison:", {cell: v for cell, (v, _) in verdicts.items()})
        print()

    print("== three-dimensional quartic chart (cuspidal discriminant)")
    from tautrel.charts import a3_expansion
    from tautrel.relations import RelationSet
    frame = idempotent_frame(a3_expansion(trunc=10), probe=[0, 1, 0])
    spec = CohFTSpec(frame, solve_flatness(frame, K=3))
    cells = [(1, 1, 1), (0, 4, 1)]
    quartic = close_relations(extract_relations(spec, cells))
    print("  closed ranks:", {cell: quartic.dim(cell) for cell in cells})
    restricted = RelationSet(cells)
    for cell in cells:
        for v in base.vectors(cell):
            restricted.add(cell, v)
    verdicts = compare_spans(restricted, quartic)
    print("  span comparison vs base:",
          {cell: v for cell, (v, _) in verdicts.items()})


if __name__ == "__main__":
    main()
