"""Vertex operators on the untwisted and twisted Fock spaces.

For ``v = h1_(-k1) ... hr_(-kr)|0>`` the operator ``Y(v, z)`` (untwisted) or
``W(v, z)`` (twisted) is the normal-ordered product of the fields
``d^(ki-1) hi(z)``.  Its coefficient of ``z^(-n-1)`` is

    sum over m1 + ... + mr = n + 1 - (k1 + ... + kr) of
        prod_i binom(-mi - 1, ki - 1) * :h1_(m1) ... hr_(mr):

and the normal ordering keeps the creation modes in place on the left and
moves each annihilation mode to the far right, the first one rightmost.  A
factor at 0-based position i that moves contributes (-1)^(r-1-i).

The twisted operator is ``Y^theta(v, z) = W(exp(Delta(z)) v, z)``.  Delta is
built from the c_mn table and contracts one e with one f in ``v``.  See
:class:`VertexEngine` for the two normalizations on offer.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exact import binomial_poly, delta_coeffs
from .fock import (
    TWISTED,
    UNTWISTED,
    State,
    apply_mode_terms,
    gen_e,
    gen_f,
    pairing,
    raw_weight2,
    to_doubled,
)

# Delta(z) = sum c_mn sum_i (e^i_(m) f^i_(n) - f^i_(m) e^i_(n)) z^(-m-n).
# Antisymmetrizing in (e, f) is what makes L_0|theta> = -1/8 at d = 1 and
# the Virasoro relations hold on the twisted space.
DELTA_SYMMETRIC = "symmetric"
# Delta(z) = sum c_mn sum_i e^i_(m) f^i_(n) z^(-m-n), read literally.
DELTA_LITERAL = "literal"


@lru_cache(maxsize=None)
def _binom_mode(m2: int, j: int) -> Fraction:
    """binom(-m - 1, j) for the mode m = m2/2."""
    return binomial_poly(Fraction(-m2 - 2, 2), j)


def _compositions(total: int, parts: int):
    """Tuples of ``parts`` non-negative ints summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _add_into(out: dict, terms: dict, c):
    for mono, v in terms.items():
        x = out.get(mono, 0) + c * v
        if x:
            out[mono] = x
        else:
            out.pop(mono, None)


class VertexEngine:
    """Mode computations for the symplectic fermions with d pairs.

    ``delta`` selects the normalization of Delta(z); the default is the
    antisymmetrized form described at the top of this module.
    """

    def __init__(self, d: int = 1, delta: str = DELTA_SYMMETRIC):
        if delta not in (DELTA_SYMMETRIC, DELTA_LITERAL):
            raise ValueError(f"unknown Delta convention {delta!r}")
        self.d = d
        self.delta = delta
        self._c_order = -1
        self._c = None
        self._field_cache = {}
        self._exp_cache = {}

    # -- coefficient table -------------------------------------------------
    def c(self, m: int, n: int) -> Fraction:
        if m + n > self._c_order:
            order = max(m + n, 2 * self._c_order, 10)
            self._c = delta_coeffs(order)
            self._c_order = order
        return self._c[m, n]

    # -- states ---------------------------------------------------------------
    def vacuum(self) -> State:
        return State.vacuum(self.d)

    def theta(self) -> State:
        return State.theta(self.d)

    def gen_state(self, g: int, k: int = 1) -> State:
        """h_(-k)|0> for generator g."""
        return State.from_factors([(g, -k)], UNTWISTED, self.d)

    def omega(self) -> State:
        out = State(UNTWISTED, {}, self.d)
        for i in range(1, self.d + 1):
            out = out + State.from_factors([(gen_e(i), -1), (gen_f(i), -1)], UNTWISTED, self.d)
        return out

    # -- the normal-ordered field product ---------------------------------
    def _field_mode(self, vmono, N2: int, umono, twisted: bool) -> dict:
        """Coefficient of z^(-N2/2 - 1) of the field of ``vmono`` applied to ``umono``."""
        key = (vmono, N2, umono, twisted)
        hit = self._field_cache.get(key)
        if hit is not None:
            return hit
        r = len(vmono)
        if r == 0:
            res = {umono: Fraction(1)} if N2 == -2 else {}
            self._field_cache[key] = res
            return res
        ks = [m2 // 2 for m2, _ in vmono]
        gs = [g for _, g in vmono]
        target = N2 + 2 - 2 * sum(ks)  # doubled sum of the internal modes
        lo = 1 if twisted else 2
        out = {}
        for mask in range(1 << r):
            ann = [i for i in range(r) if mask >> i & 1]
            cre = [i for i in range(r) if not mask >> i & 1]
            sign = 1
            for i in ann:
                if (r - 1 - i) % 2:
                    sign = -sign
            self._ann_stage(ann, 0, {umono: Fraction(1)}, 0, Fraction(sign), gs, ks, cre, target, lo, out)
        self._field_cache[key] = out
        return out

    def _ann_stage(self, ann, t, state, used, coeff, gs, ks, cre, target, lo, out):
        if not state:
            return
        if t == len(ann):
            self._cre_stage(state, coeff, gs, ks, cre, target - used, lo, out)
            return
        i = ann[t]
        g = gs[i]
        modes = set()
        for mono in state:
            for m2, og in mono:
                if pairing(g, og):
                    modes.add(m2)
        for m2 in sorted(modes):
            b = _binom_mode(m2, ks[i] - 1)
            if not b:
                continue
            nxt = apply_mode_terms(g, m2, state)
            if nxt:
                self._ann_stage(ann, t + 1, nxt, used + m2, coeff * b, gs, ks, cre, target, lo, out)

    def _cre_stage(self, state, coeff, gs, ks, cre, remaining, lo, out):
        c = len(cre)
        if c == 0:
            if remaining == 0:
                _add_into(out, state, coeff)
            return
        # each creation mode is -(lo + 2 t_j) with t_j >= 0
        excess = -remaining - c * lo
        if excess < 0 or excess % 2:
            return
        for ts in _compositions(excess // 2, c):
            k = coeff
            for j, t in zip(cre, ts):
                k = k * _binom_mode(-(lo + 2 * t), ks[j] - 1)
                if not k:
                    break
            if not k:
                continue
            cur = state
            for j, t in sorted(zip(cre, ts), reverse=True):
                cur = apply_mode_terms(gs[j], -(lo + 2 * t), cur)
                if not cur:
                    break
            if cur:
                _add_into(out, cur, k)

    # -- Delta and its exponential ----------------------------------------------
    def _delta_terms(self, terms: dict) -> dict:
        """Delta applied to an untwisted dict: power p -> dict."""
        out = {}
        top = max((raw_weight2(m) for m in terms), default=0) // 2
        for i in range(1, self.d + 1):
            e, f = gen_e(i), gen_f(i)
            for m in range(1, top + 1):
                for n in range(1, top + 1 - m):
                    c = self.c(m, n)
                    if not c:
                        continue
                    part = apply_mode_terms(e, 2 * m, apply_mode_terms(f, 2 * n, terms))
                    if self.delta == DELTA_SYMMETRIC:
                        other = apply_mode_terms(f, 2 * m, apply_mode_terms(e, 2 * n, terms))
                        _add_into(part, other, -1)
                    if part:
                        bucket = out.setdefault(m + n, {})
                        _add_into(bucket, part, c)
        return {p: t for p, t in out.items() if t}

    def exp_delta(self, vmono) -> dict:
        """exp(Delta(z)) on one monomial: power p -> dict, meaning z^(-p)."""
        hit = self._exp_cache.get(vmono)
        if hit is not None:
            return hit
        total = {0: {vmono: Fraction(1)}}
        level = {0: {vmono: Fraction(1)}}
        k = 0
        while level:
            k += 1
            nxt = {}
            for p, terms in level.items():
                for q, t in self._delta_terms(terms).items():
                    _add_into(nxt.setdefault(p + q, {}), t, Fraction(1, k))
            level = {p: t for p, t in nxt.items() if t}
            for p, t in level.items():
                _add_into(total.setdefault(p, {}), t, 1)
        total = {p: t for p, t in total.items() if t}
        self._exp_cache[vmono] = total
        return total

    # -- public modes -------------------------------------------------------------
    def _check_mode(self, vmono, N2: int, twisted: bool):
        odd = len(vmono) % 2
        if not twisted and N2 % 2:
            raise ValueError("untwisted modes must be integers")
        if twisted and (N2 % 2) != odd:
            kind = "half-integer" if odd else "integer"
            raise ValueError(f"a length-{len(vmono)} vector needs {kind} modes on the twisted space")

    def untwisted_mode(self, v: State, n, u: State) -> State:
        if v.sector != UNTWISTED or u.sector != UNTWISTED:
            raise ValueError("untwisted_mode needs v and u in the untwisted space")
        N2 = to_doubled(n)
        out = {}
        for vm, vc in v.terms.items():
            self._check_mode(vm, N2, False)
            for um, uc in u.terms.items():
                _add_into(out, self._field_mode(vm, N2, um, False), vc * uc)
        return State(UNTWISTED, out, self.d)

    def twisted_monomial_mode(self, vmono, N2: int, umono) -> dict:
        key = ("tw", vmono, N2, umono)
        hit = self._field_cache.get(key)
        if hit is not None:
            return hit
        out = {}
        for p, terms in self.exp_delta(vmono).items():
            for wm, wc in terms.items():
                _add_into(out, self._field_mode(wm, N2 - 2 * p, umono, True), wc)
        self._field_cache[key] = out
        return out

    def twisted_mode(self, v: State, n, u: State) -> State:
        if v.sector != UNTWISTED:
            raise ValueError("vertex operators are labelled by untwisted states")
        if u.sector != TWISTED:
            raise ValueError("twisted_mode acts on the twisted space")
        N2 = to_doubled(n)
        out = {}
        for vm, vc in v.terms.items():
            self._check_mode(vm, N2, True)
            for um, uc in u.terms.items():
                _add_into(out, self.twisted_monomial_mode(vm, N2, um), vc * uc)
        return State(TWISTED, out, self.d)

    def mode(self, v: State, n, u: State) -> State:
        """v_(n) u on whichever space u lives in."""
        if u.sector == TWISTED:
            return self.twisted_mode(v, n, u)
        return self.untwisted_mode(v, n, u)

    def virasoro(self, n: int, u: State) -> State:
        return self.mode(self.omega(), n + 1, u)

    def L(self, n: int, u: State) -> State:
        return self.virasoro(n, u)

    def ground_energy(self) -> Fraction:
        """The L_0 eigenvalue on |theta>."""
        th = self.theta()
        res = self.virasoro(0, th)
        extra = set(res.terms) - {()}
        if extra:
            raise ArithmeticError("|theta> is not an L_0 eigenvector")
        return res.coeff(())


# ---------------------------------------------------------------------------
# strong generators for d = 1 and parity helpers


def strong_generators(d: int = 1, i: int = 1, j: int = 1) -> dict:
    """omega, E^{ij}, H^{ij}, F^{ij} as untwisted states (i = j = 1 at d = 1)."""
    ei, ej, fi, fj = gen_e(i), gen_e(j), gen_f(i), gen_f(j)
    half = Fraction(1, 2)

    def two(g1, k1, g2, k2):
        return State.from_factors([(g1, -k1), (g2, -k2)], UNTWISTED, d)

    omega = State(UNTWISTED, {}, d)
    for t in range(1, d + 1):
        omega = omega + two(gen_e(t), 1, gen_f(t), 1)
    E = (two(ei, 2, ej, 1) + two(ej, 2, ei, 1)) * half
    H = (two(ei, 2, fj, 1) + two(fj, 2, ei, 1)) * half
    F = (two(fi, 2, fj, 1) + two(fj, 2, fi, 1)) * half
    return {"omega": omega, "E": E, "H": H, "F": F}


def state_parity(s: State) -> int:
    p = s.parity()
    return 0 if p is None else p


def state_weight(s: State) -> Fraction:
    """Raw weight of a homogeneous state (0 for the zero state)."""
    ws = s.weights2()
    if len(ws) > 1:
        raise ValueError("state is not homogeneous")
    return Fraction(ws.pop(), 2) if ws else Fraction(0)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


# ---------------------------------------------------------------------------
# identity checks


def check_commutator(V: VertexEngine, a1: State, a2: State, m, n, u: State, report: bool = False):
    """[a1_(m), a2_(n)] u = sum_j binom(m, j) (a1_(j) a2)_(m+n-j) u."""
    m, n = Fraction(m), Fraction(n)
    p = state_parity(a1) * state_parity(a2)
    lhs = V.mode(a1, m, V.mode(a2, n, u))
    rhs2 = V.mode(a2, n, V.mode(a1, m, u))
    lhs = lhs - rhs2 if p == 0 else lhs + rhs2
    rhs = u.zero()
    top = _floor(state_weight(a1) + state_weight(a2))
    for j in range(top + 1):
        b = binomial_poly(m, j)
        if not b:
            continue
        inner = V.untwisted_mode(a1, j, a2)
        if inner:
            rhs = rhs + V.mode(inner, m + n - j, u) * b
    ok = lhs == rhs
    if report:
        return ok, lhs, rhs
    return ok


def check_associativity(V: VertexEngine, a1: State, a2: State, m: int, n, u: State, report: bool = False):
    """(a1_(m) a2)_(n) u = sum_j (-1)^j binom(m, j) (a1_(m-j) a2_(n+j) - ...) u.

    On the twisted space this form needs a1 even (integer modes for a1).
    """
    if Fraction(m).denominator != 1:
        raise ValueError("m must be an integer")
    m, n = int(m), Fraction(n)
    if u.sector == TWISTED and state_parity(a1):
        raise ValueError("twisted associativity is only checked for even a1")
    p = state_parity(a1) * state_parity(a2)
    lhs = V.mode(V.untwisted_mode(a1, m, a2), n, u)
    wu = Fraction(u.max_weight2(), 2)
    w1, w2 = state_weight(a1), state_weight(a2)
    jmax = max(_floor(w2 + wu - n - 1), _floor(w1 + wu - 1), 0) + 1
    sign_m = -1 if m % 2 else 1
    rhs = u.zero()
    for j in range(jmax + 1):
        b = binomial_poly(Fraction(m), j)
        if not b:
            continue
        if j % 2:
            b = -b
        t1 = V.mode(a1, m - j, V.mode(a2, n + j, u))
        t2 = V.mode(a2, m + n - j, V.mode(a1, j, u))
        s2 = sign_m * (-1 if p else 1)
        rhs = rhs + (t1 - t2 * s2) * b
    ok = lhs == rhs
    if report:
        return ok, lhs, rhs
    return ok


def virasoro_bracket_check(V: VertexEngine, m: int, n: int, u: State) -> bool:
    """[L_m, L_n] u = (m - n) L_{m+n} u + delta_{m+n,0} (m^3 - m)/12 * (-2d) u."""
    lhs = V.L(m, V.L(n, u)) - V.L(n, V.L(m, u))
    rhs = V.L(m + n, u) * (m - n)
    if m + n == 0:
        rhs = rhs + u * (Fraction(m**3 - m, 12) * (-2 * V.d))
    return lhs == rhs


def check_L_minus1_axiom(V: VertexEngine, a: State, n, u: State) -> bool:
    """(L_{-1} a)_(n) u = -n a_(n-1) u."""
    n = Fraction(n)
    la = V.L(-1, a)
    return V.mode(la, n, u) == V.mode(a, n - 1, u) * (-n)


def quadratic_closed_form(V: VertexEngine, h1: int, m: int, h2: int, n: int, k: int, u: State) -> State:
    """The closed double sums for (h1_(-m) h2_(-n)|0>)_(k) on the twisted space.

    sum over i + j = -m - n + k + 1 with i, j half-integers of
    binom(-i-1, m-1) binom(-j-1, n-1) :h1_(i) h2_(j): u.  Only k = -1 and
    k = 0 are claimed to agree with the twisted operator.
    """
    if u.sector != TWISTED:
        raise ValueError("closed forms are for the twisted space")
    total2 = 2 * (-m - n + k + 1)
    wu2 = u.max_weight2()
    out = u.zero()
    # i ranges over odd doubled values with both annihilators bounded by u
    for i2 in range(total2 - wu2 - 1, wu2 + 2):
        if i2 % 2 == 0:
            continue
        j2 = total2 - i2
        c = binomial_poly(Fraction(-i2 - 2, 2), m - 1) * binomial_poly(Fraction(-j2 - 2, 2), n - 1)
        if not c:
            continue
        if i2 < 0:
            term = u.apply(h2, Fraction(j2, 2)).apply(h1, Fraction(i2, 2))
        else:
            term = -u.apply(h1, Fraction(i2, 2)).apply(h2, Fraction(j2, 2))
        out = out + term * c
    return out
