"""Exact rational scalars, polynomials in a, b, c, and the appendix matrix.

Scalars are ``fractions.Fraction`` throughout (aliased as ``Rat``).  The
polynomial type :class:`PolyQ` is a small sparse map from exponent triples to
rationals; it only supports what the determinant work needs (ring operations,
exact division inside Bareiss elimination, evaluation).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm
from typing import Iterable, Union

Rat = Fraction

VARS = ("a", "b", "c")

Scalar = Union[int, Fraction]


def as_rat(x) -> Fraction:
    """Parse ints, Fractions and strings like ``"-1/2"`` into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class PolyQ:
    """Sparse polynomial in a, b, c with rational coefficients.

    ``terms`` maps ``(deg_a, deg_b, deg_c)`` to a nonzero Fraction.  Instances
    are treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[tuple(mono)] = Fraction(c)
        self.terms = clean

    @classmethod
    def const(cls, c: Scalar) -> "PolyQ":
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, name: str) -> "PolyQ":
        exps = [0, 0, 0]
        exps[VARS.index(name)] = 1
        return cls({tuple(exps): 1})

    @staticmethod
    def _lift(x) -> "PolyQ":
        if isinstance(x, PolyQ):
            return x
        return PolyQ.const(as_rat(x))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return PolyQ(out)

    __radd__ = __add__

    def __neg__(self):
        return PolyQ({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, PolyQ):
            c = as_rat(other)
            return PolyQ({m: c * v for m, v in self.terms.items()})
        out = {}
        for (a1, b1, c1), x in self.terms.items():
            for (a2, b2, c2), y in other.terms.items():
                m = (a1 + a2, b1 + b2, c1 + c2)
                out[m] = out.get(m, 0) + x * y
        return PolyQ(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyQ):
            try:
                other = self._lift(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree(self, var: str | None = None) -> int:
        """Total degree, or the degree in one variable; -1 for zero."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(m) for m in self.terms)
        i = VARS.index(var)
        return max(m[i] for m in self.terms)

    def evaluate(self, a: Scalar = 0, b: Scalar = 0, c: Scalar = 0) -> Fraction:
        vals = (as_rat(a), as_rat(b), as_rat(c))
        total = Fraction(0)
        for m, coeff in self.terms.items():
            t = coeff
            for v, e in zip(vals, m):
                if e:
                    t *= v**e
            total += t
        return total

    __call__ = evaluate

    def sorted_terms(self):
        """Terms in graded lexicographic order, a > b > c, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __repr__(self):
        if not self.terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            factors = []
            for name, e in zip(VARS, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(body)
            elif c == -1:
                pieces.append("-" + body)
            else:
                pieces.append(f"{c}*{body}")
        return " + ".join(pieces).replace("+ -", "- ")


def binomial_poly(top, k: int):
    """Generalized binomial top*(top-1)*...*(top-k+1)/k!.

    ``top`` may be a PolyQ, an int or a Fraction; the result has the same
    flavour (PolyQ for PolyQ input, Fraction otherwise).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(top, PolyQ):
        out = PolyQ.const(1)
        for i in range(k):
            out = out * (top - i)
        return out * Fraction(1, factorial(k))
    top = as_rat(top)
    out = Fraction(1)
    for i in range(k):
        out *= top - i
    return out / factorial(k)


# ---------------------------------------------------------------------------
# the appendix matrix


def A_entry(k: int, p: int, q: int, a, b, c):
    """Entry A^k_{p,q}(a, b, c).  Works for PolyQ or rational arguments."""
    if not (0 <= p <= k + 1):
        raise IndexError(f"p={p} outside 0..{k + 1}")
    if p <= k:
        return binomial_poly(q + a, p) * binomial_poly(k - q + b, k - p)
    return binomial_poly(q + c, k + 1)


@dataclass(frozen=True)
class MatrixPoly:
    """Square matrix of PolyQ entries; ``rows[i][j]`` is row i, column j."""

    rows: tuple

    def __post_init__(self):
        n = len(self.rows)
        if n < 1 or any(len(r) != n for r in self.rows):
            raise ValueError("MatrixPoly must be square and non-empty")

    @property
    def size(self) -> int:
        return len(self.rows)

    def evaluate(self, a=0, b=0, c=0):
        return [[e.evaluate(a, b, c) for e in row] for row in self.rows]


_A = PolyQ.var("a")
_B = PolyQ.var("b")
_C = PolyQ.var("c")


def build_A_matrix(k: int) -> MatrixPoly:
    """A^k(a,b,c) stored with rows indexed by q and columns by p."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n = k + 2
    rows = tuple(
        tuple(A_entry(k, p, q, _A, _B, _C) for p in range(n)) for q in range(n)
    )
    return MatrixPoly(rows)


# Bareiss elimination runs on integer polynomials packed into single ints:
# the exponent triple (i, j, k) becomes i*2^20 + j*2^10 + k.  Packed keys add
# under multiplication and compare like lexicographic order, which is all the
# exact division needs.  Degrees stay far below 1024 for the matrices here.
_SHIFT = 10
_VA, _VB = 1 << (2 * _SHIFT), 1 << _SHIFT


def _pack(mono):
    return mono[0] * _VA + mono[1] * _VB + mono[2]


def _unpack(key):
    mask = (1 << _SHIFT) - 1
    return (key >> (2 * _SHIFT), (key >> _SHIFT) & mask, key & mask)


def _bareiss_step(ss, ij, is_, sj, prev):
    """(ss*ij - is_*sj) / prev for packed integer polynomials."""
    out = {}
    get = out.get
    if len(ss) > len(ij):
        ss, ij = ij, ss
    right = list(ij.items())
    for m1, c1 in ss.items():
        for m2, c2 in right:
            m = m1 + m2
            out[m] = get(m, 0) + c1 * c2
    if len(is_) > len(sj):
        is_, sj = sj, is_
    right = list(sj.items())
    for m1, c1 in is_.items():
        for m2, c2 in right:
            m = m1 + m2
            out[m] = get(m, 0) - c1 * c2
    out = {m: c for m, c in out.items() if c}
    if len(prev) == 1 and prev.get(0) == 1:
        return out
    return _exact_divide(out, prev)


def _exact_divide(f, g):
    """Quotient f/g of packed integer polynomials known to divide exactly."""
    lead = max(g)
    lc = g[lead]
    tail = [(m - lead, c) for m, c in g.items() if m != lead]
    rem = dict(f)
    quot = {}
    heap = [-m for m in rem]
    heapq.heapify(heap)
    while heap:
        top = -heapq.heappop(heap)
        c0 = rem.pop(top, 0)
        if not c0:
            continue
        while heap and -heap[0] == top:
            heapq.heappop(heap)
        c, r = divmod(c0, lc)
        if r:
            raise ArithmeticError("Bareiss division was not exact")
        quot[top - lead] = c
        for dm, cg in tail:
            m = top + dm
            v = rem.get(m)
            if v is None:
                rem[m] = -c * cg
                heapq.heappush(heap, -m)
            else:
                rem[m] = v - c * cg
    return quot


def det_fraction_free(m: MatrixPoly) -> PolyQ:
    """Determinant by Bareiss elimination over Z[a,b,c].

    Each column is first scaled by the lcm of its denominators so the whole
    elimination happens on integer polynomials; the scale is divided out at
    the end.  Intermediate results are exact quotients, never fractions of
    polynomials.
    """
    n = m.size
    scale = 1
    work = [[None] * n for _ in range(n)]
    for j in range(n):
        den = 1
        for i in range(n):
            for c in m.rows[i][j].terms.values():
                den = lcm(den, c.denominator)
        scale *= den
        for i in range(n):
            work[i][j] = {
                _pack(mono): int(c * den) for mono, c in m.rows[i][j].terms.items()
            }
    sign = 1
    prev = {0: 1}
    for s in range(n - 1):
        if not work[s][s]:
            for i in range(s + 1, n):
                if work[i][s]:
                    work[s], work[i] = work[i], work[s]
                    sign = -sign
                    break
            else:
                return PolyQ()
        piv = work[s]
        for i in range(s + 1, n):
            row = work[i]
            for j in range(s + 1, n):
                row[j] = _bareiss_step(piv[s], row[j], row[s], piv[j], prev)
        prev = piv[s]
    last = work[n - 1][n - 1]
    return PolyQ({_unpack(k): Fraction(sign * c, scale) for k, c in last.items()})


def det_rational(rows) -> Fraction:
    """Determinant of a square matrix of rationals (fraction-free on Z)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    scale = 1
    work = []
    for row in rows:
        row = [as_rat(x) for x in row]
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        scale *= den
        work.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for s in range(n - 1):
        if work[s][s] == 0:
            for i in range(s + 1, n):
                if work[i][s]:
                    work[s], work[i] = work[i], work[s]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(s + 1, n):
            for j in range(s + 1, n):
                work[i][j] = (work[s][s] * work[i][j] - work[i][s] * work[s][j]) // prev
        prev = work[s][s]
    return Fraction(sign * work[n - 1][n - 1], scale)


def det_product_formula(k: int) -> PolyQ:
    """The closed form prod_{i=1}^k binom(a+b+i, i)."""
    out = PolyQ.const(1)
    for i in range(1, k + 1):
        out = out * binomial_poly(_A + _B + i, i)
    return out


def verify_det_identity(k_max: int) -> list:
    """One JSON-ready record per k comparing Bareiss to the product formula."""
    records = []
    for k in range(k_max + 1):
        lhs = det_fraction_free(build_A_matrix(k))
        rhs = det_product_formula(k)
        records.append(
            {
                "k": k,
                "lhs_terms": len(lhs.terms),
                "rhs_terms": len(rhs.terms),
                "equal": (lhs - rhs).is_zero(),
                "c_degree": lhs.degree("c"),
            }
        )
    return records


def B_entry(k: int, p: int, q: int) -> PolyQ:
    return A_entry(k, p, q, _A, _B, _C) - A_entry(k, p, q + 1, _A, _B, _C)


def verify_column_telescope(k: int) -> bool:
    """Check A^{k-1}_{0,q} + sum_{i=1}^p B^k_{i,q} = A^{k-1}_{p,q} symbolically.

    Runs over 0 <= p <= k-1 and 0 <= q <= k.
    """
    if k < 1:
        raise ValueError("the telescoping identity needs k >= 1")
    for q in range(k + 1):
        running = A_entry(k - 1, 0, q, _A, _B, _C)
        for p in range(k):
            if p > 0:
                running = running + B_entry(k, p, q)
            if not (running - A_entry(k - 1, p, q, _A, _B, _C)).is_zero():
                return False
    return True


def specialized_det(k: int, a, b, c) -> Fraction:
    """det A^k evaluated at a rational point, computed from the numeric matrix."""
    a, b, c = as_rat(a), as_rat(b), as_rat(c)
    n = k + 2
    rows = [[A_entry(k, p, q, a, b, c) for p in range(n)] for q in range(n)]
    return det_rational(rows)


# ---------------------------------------------------------------------------
# truncated power series in two variables


class SeriesQ2:
    """Bivariate series sum c_mn x^m y^n truncated at total degree ``order``."""

    def __init__(self, order: int, coeffs=None):
        self.order = order
        self.coeffs = {}
        for (m, n), c in (coeffs or {}).items():
            if m + n <= order and c:
                self.coeffs[(m, n)] = Fraction(c)

    def __getitem__(self, mn) -> Fraction:
        m, n = mn
        if m < 0 or n < 0 or m + n > self.order:
            raise KeyError(f"({m},{n}) is beyond truncation order {self.order}")
        return self.coeffs.get((m, n), Fraction(0))

    def __add__(self, other):
        order = min(self.order, other.order)
        out = dict(self.coeffs)
        for mn, c in other.coeffs.items():
            out[mn] = out.get(mn, 0) + c
        return SeriesQ2(order, out)

    def __mul__(self, other):
        if not isinstance(other, SeriesQ2):
            c = as_rat(other)
            return SeriesQ2(self.order, {mn: c * v for mn, v in self.coeffs.items()})
        order = min(self.order, other.order)
        out = {}
        for (m1, n1), x in self.coeffs.items():
            for (m2, n2), y in other.coeffs.items():
                if m1 + m2 + n1 + n2 <= order:
                    key = (m1 + m2, n1 + n2)
                    out[key] = out.get(key, 0) + x * y
        return SeriesQ2(order, out)

    __rmul__ = __mul__

    def is_symmetric(self) -> bool:
        return all(self[n, m] == c for (m, n), c in self.coeffs.items())

    def to_json(self) -> list:
        rows = []
        for m in range(self.order + 1):
            for n in range(self.order + 1 - m):
                c = self[m, n]
                rows.append(
                    {"m": m, "n": n, "num": str(c.numerator), "den": str(c.denominator)}
                )
        return rows


def sqrt1p_coeffs(order: int) -> list:
    """Coefficients of (1+x)^(1/2) up to x^order."""
    return [binomial_poly(Fraction(1, 2), j) for j in range(order + 1)]


def delta_coeffs(order: int) -> SeriesQ2:
    """c_mn from -log(((1+x)^(1/2) + (1+y)^(1/2)) / 2), for m+n <= order.

    Write the argument of the log as 1 + u with
    u = (s(x) - 1)/2 + (s(y) - 1)/2, which has no constant term, and sum
    -log(1+u) = sum_{j>=1} (-1)^j u^j / j.  The square-root series is taken
    to order+1 so that every power of u is known to full target order.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    s = sqrt1p_coeffs(order + 1)
    u_terms = {}
    for j in range(1, order + 1):
        half = s[j] / 2
        u_terms[(j, 0)] = u_terms.get((j, 0), 0) + half
        u_terms[(0, j)] = u_terms.get((0, j), 0) + half
    u = SeriesQ2(order, u_terms)
    total = SeriesQ2(order)
    power = SeriesQ2(order, {(0, 0): 1})
    for j in range(1, order + 1):
        power = power * u
        total = total + power * Fraction((-1) ** j, j)
    return total


def frac_text(x: Fraction) -> str:
    return str(as_rat(x))


def rat_list(xs: Iterable) -> list:
    return [as_rat(x) for x in xs]
