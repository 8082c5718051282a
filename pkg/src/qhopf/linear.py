"""Exact incremental Gaussian elimination over RationalFunction.

Rows are sparse column -> coefficient dicts with hashable column labels.
A GaussianBasis keeps an echelon set of pivot rows under a caller-supplied
elimination priority: among the columns of a row, the one with the smallest
priority key becomes the pivot, and reduction always removes pivot columns
in priority order.  Pivot rows are normalized to pivot coefficient 1 and,
because the pivot is the smallest-key column of its row, reduction strictly
moves remaining support toward larger keys, so it terminates.

The quotient construction eliminates high words first (so surviving basis
representatives are the low words); span expression eliminates word columns
before solution-tracking columns, which turns elimination into a solver.
"""

from __future__ import annotations

from .field import rf


def vec_axpy(target, c, row):
    """target += c * row in place on sparse dicts."""
    for col, v in row.items():
        cur = target.get(col)
        s = c * v if cur is None else cur + c * v
        if s.is_zero:
            target.pop(col, None)
        else:
            target[col] = s
    return target


def vec_scale(row, c):
    return {col: c * v for col, v in row.items()}


class GaussianBasis:
    """Echelon row space, incremental, over an arbitrary ordered column set."""

    def __init__(self, priority):
        self.priority = priority
        self.pivots = {}  # pivot column -> normalized row

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, row):
        """Residual of row after elimination; does not mutate the input."""
        row = {c: v for c, v in row.items() if not v.is_zero}
        while True:
            hit = None
            for col in row:
                if col in self.pivots:
                    k = self.priority(col)
                    if hit is None or k < hit[0]:
                        hit = (k, col)
            if hit is None:
                return row
            col = hit[1]
            vec_axpy(row, -row[col], self.pivots[col])

    def add(self, row):
        """Insert a row; returns the new pivot column, or None if dependent."""
        res = self.reduce(row)
        if not res:
            return None
        col = min(res, key=self.priority)
        inv = rf(1) / res[col]
        self.pivots[col] = vec_scale(res, inv)
        return col

    def pivot_columns(self):
        return sorted(self.pivots, key=self.priority)


def solve_in_span(vectors, target, priority):
    """Exact coefficients c with sum(c[i] * vectors[i]) == target, or None.

    Vectors and target are sparse dicts over comparable-by-priority columns.
    Works for dependent spanning sets; any one valid solution is returned.
    """

    def aug_priority(col):
        if isinstance(col, _Track):
            return (1, col.i)
        return (0, priority(col))

    basis = GaussianBasis(aug_priority)
    for i, v in enumerate(vectors):
        row = dict(v)
        row[_Track(i)] = rf(1)
        basis.add(row)
    res = basis.reduce(target)
    coeffs = [rf(0)] * len(vectors)
    for col, v in res.items():
        if isinstance(col, _Track):
            coeffs[col.i] = -v
        else:
            return None
    return coeffs


class _Track:
    """Solution-tracking column label, ordered after all data columns."""

    __slots__ = ("i",)

    def __init__(self, i):
        self.i = i

    def __eq__(self, other):
        return isinstance(other, _Track) and other.i == self.i

    def __hash__(self):
        return hash(("track", self.i))
