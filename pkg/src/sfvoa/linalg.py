"""Sparse exact row reduction.

Vectors are dicts from hashable keys to Fractions.  A :class:`Span` keeps its
rows in echelon form: every row has a distinct pivot, the largest key it
contains under a caller-supplied sort key, normalised to coefficient 1.
"""

from __future__ import annotations

from fractions import Fraction


class Span:
    def __init__(self, sort_key=None):
        self.sort_key = sort_key or (lambda k: k)
        self.rows = {}  # pivot -> row (dict, pivot coefficient 1)
        self._keycache = {}

    def _key(self, k):
        v = self._keycache.get(k)
        if v is None:
            v = self.sort_key(k)
            self._keycache[k] = v
        return v

    def __len__(self):
        return len(self.rows)

    def copy(self) -> "Span":
        other = Span(self.sort_key)
        other.rows = {p: dict(r) for p, r in self.rows.items()}
        other._keycache = self._keycache
        return other

    def reduce(self, vec: dict) -> dict:
        """Remainder of ``vec`` after eliminating every pivot it touches."""
        work = {k: Fraction(c) for k, c in vec.items() if c}
        out = {}
        rows = self.rows
        key = self._key
        while work:
            top = max(work, key=key)
            c = work.pop(top)
            row = rows.get(top)
            if row is None:
                out[top] = c
                continue
            for k, v in row.items():
                if k == top:
                    continue
                x = work.get(k, 0) - c * v
                if x:
                    work[k] = x
                else:
                    work.pop(k, None)
        return out

    def add(self, vec: dict) -> dict | None:
        """Insert ``vec``; returns the new normalised row, or None if dependent."""
        rem = self.reduce(vec)
        if not rem:
            return None
        top = max(rem, key=self._key)
        inv = 1 / rem[top]
        row = {k: v * inv for k, v in rem.items()}
        self.rows[top] = row
        return row

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def rref_rows(self) -> list:
        """Fully reduced rows (Gauss-Jordan), sorted by pivot, largest first."""
        pivots = sorted(self.rows, key=self._key)
        done = {}
        for p in pivots:  # smallest pivot first: later rows only need earlier ones
            row = dict(self.rows[p])
            for q in list(row):
                if q != p and q in done:
                    c = row.pop(q)
                    for k, v in done[q].items():
                        if k == q:
                            continue
                        x = row.get(k, 0) - c * v
                        if x:
                            row[k] = x
                        else:
                            row.pop(k, None)
            done[p] = row
        return [done[p] for p in reversed(pivots)]


def find_dependencies(vectors: list, base: Span | None = None, sort_key=None) -> list:
    """Linear relations among ``vectors`` modulo the span ``base``.

    Returns a list of dicts ``{index: coefficient}``, a basis of the space of
    coefficient vectors c with sum_i c_i vectors[i] in span(base).
    """
    key = sort_key or (base.sort_key if base is not None else (lambda k: k))
    tagged_key = lambda k: (1, key(k[1])) if k[0] == "v" else (0, k[1])

    span = Span(tagged_key)
    if base is not None:
        for p, row in base.rows.items():
            span.rows[("v", p)] = {("v", k): c for k, c in row.items()}
    deps = []
    for i, vec in enumerate(vectors):
        tagged = {("v", k): c for k, c in vec.items()}
        tagged[("t", i)] = Fraction(1)
        rem = span.reduce(tagged)
        if all(k[0] == "t" for k in rem):
            deps.append({k[1]: c for k, c in rem.items()})
            continue
        top = max(rem, key=tagged_key)
        inv = 1 / rem[top]
        span.rows[top] = {k: v * inv for k, v in rem.items()}
    return deps
