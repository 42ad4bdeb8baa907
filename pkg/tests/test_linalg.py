from fractions import Fraction
from itertools import product

import sympy
from hypothesis import given, settings
import hypothesis.strategies as st

from sfvoa.linalg import Span, find_dependencies

KEYS = list(range(5))
coeffs = st.integers(-2, 2).map(Fraction)
vectors = st.dictionaries(st.sampled_from(KEYS), coeffs, max_size=4).map(lambda v: {k: c for k, c in v.items() if c})


def rank(rows):
    if not rows:
        return 0
    return sympy.Matrix([[r.get(k, 0) for k in KEYS] for r in rows]).rank()


@given(st.lists(vectors, max_size=6))
def test_span_dimension_is_rank(vs):
    sp = Span()
    for v in vs:
        sp.add(v)
    assert len(sp) == rank(vs)
    for v in vs:
        assert sp.contains(v)


@given(st.lists(vectors, min_size=1, max_size=5), vectors)
def test_reduce_is_zero_exactly_for_members(vs, w):
    sp = Span()
    for v in vs:
        sp.add(v)
    assert sp.contains(w) == (rank(vs + [w]) == rank(vs))
    rem = sp.reduce(w)
    assert sp.reduce(rem) == rem


@given(st.lists(vectors, max_size=5))
def test_rref_rows_span_the_same_space(vs):
    sp = Span()
    for v in vs:
        sp.add(v)
    rows = sp.rref_rows()
    assert rank(rows) == len(rows) == len(sp)
    pivots = [max(r) for r in rows]
    for r, p in zip(rows, pivots):
        assert r[p] == 1
        assert all(q == p or q not in r for q in pivots)


@settings(max_examples=60)
@given(st.lists(vectors, max_size=5), st.lists(vectors, max_size=2))
def test_find_dependencies_against_brute_force(vs, base_vs):
    base = Span()
    for v in base_vs:
        base.add(v)
    deps = find_dependencies(vs, base)
    # every reported relation lands in the base span
    for dep in deps:
        combo = {}
        for i, c in dep.items():
            for k, x in vs[i].items():
                combo[k] = combo.get(k, 0) + c * x
        assert base.contains({k: x for k, x in combo.items() if x})
    # and there are as many as the nullity of vs modulo the base
    assert len(deps) == len(vs) - (rank(vs + base_vs) - rank(base_vs))
    # relations are independent
    if deps:
        m = sympy.Matrix([[d.get(i, 0) for i in range(len(vs))] for d in deps])
        assert m.rank() == len(deps)


def test_find_dependencies_small_coefficients_exhaustive():
    # two-dimensional space, three vectors: exactly one relation
    vs = [{0: 1}, {1: 1}, {0: 1, 1: 1}]
    (dep,) = find_dependencies(vs)
    ratios = {i: c / dep[2] for i, c in dep.items()}
    assert ratios == {0: -1, 1: -1, 2: 1}
    # brute force over small integer combinations finds the same line
    sols = [c for c in product(range(-2, 3), repeat=3) if any(c)
            and all(sum(ci * v.get(k, 0) for ci, v in zip(c, vs)) == 0 for k in (0, 1))]
    assert all(c[0] == c[1] == -c[2] for c in sols)
