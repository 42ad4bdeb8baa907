"""Fermionic Fock spaces for the symplectic fermions.

Generators of h are numbered ``g = 2*(i-1) + kind`` with ``kind`` 0 for e^i
and 1 for f^i.  Modes are stored doubled (``m2 = 2*n``) so integer and
half-integer modes are both plain ints.

A monomial ``h1_(-n1) ... hr_(-nr)|vac>`` is the tuple
``((2*n1, g1), ..., (2*nr, gr))``.  The canonical written order puts larger
|mode| to the left; equal modes are ordered by generator index, so e^i comes
before f^i.  For example ``e_(-1) f_(-1)|0>`` is canonical while
``f_(-1) e_(-1)|0>`` equals minus it, and ``e_(-2) e_(-1)|0>`` is canonical
with sign +1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

UNTWISTED = "untwisted"
TWISTED = "twisted"
SECTORS = (UNTWISTED, TWISTED)


def gen_e(i: int = 1) -> int:
    return 2 * (i - 1)


def gen_f(i: int = 1) -> int:
    return 2 * (i - 1) + 1


def pairing(g: int, h: int) -> int:
    """<g, h> with <e^i, f^j> = -delta_ij and <f^i, e^j> = +delta_ij."""
    if g // 2 != h // 2 or g % 2 == h % 2:
        return 0
    return -1 if g % 2 == 0 else 1


@dataclass(frozen=True)
class SymplecticBasis:
    d: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be a positive integer")

    @property
    def generators(self) -> tuple:
        return tuple(range(2 * self.d))

    def pairing(self, g: int, h: int) -> int:
        return pairing(g, h)

    def name(self, g: int) -> str:
        return gen_name(g, self.d)


def gen_name(g: int, d: int = 1) -> str:
    letter = "ef"[g % 2]
    return letter if d == 1 else f"{letter}{g // 2 + 1}"


def parse_gen(name: str) -> int:
    m = re.fullmatch(r"([ef])(\d*)", name.strip())
    if not m:
        raise ValueError(f"unknown generator {name!r}")
    i = int(m.group(2)) if m.group(2) else 1
    return 2 * (i - 1) + (0 if m.group(1) == "e" else 1)


# ---------------------------------------------------------------------------
# modes


@dataclass(frozen=True)
class ModeIndex:
    doubled: int
    sector: str

    def __post_init__(self):
        if self.sector not in SECTORS:
            raise ValueError(f"unknown sector {self.sector!r}")
        if (self.doubled % 2 == 1) != (self.sector == TWISTED):
            raise ValueError(f"mode {Fraction(self.doubled, 2)} does not live in the {self.sector} sector")

    @classmethod
    def of(cls, n, sector: str) -> "ModeIndex":
        return cls(to_doubled(n), sector)

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)


def to_doubled(n) -> int:
    """2*n as an int, for n an int, Fraction, or string like '-1/2'."""
    if isinstance(n, ModeIndex):
        return n.doubled
    x = Fraction(n)
    two = 2 * x
    if two.denominator != 1:
        raise ValueError(f"{n} is neither an integer nor a half-integer")
    return int(two)


def sector_of_doubled(m2: int) -> str:
    return TWISTED if m2 % 2 else UNTWISTED


def check_mode_sector(m2: int, sector: str):
    if sector_of_doubled(m2) != sector:
        raise ValueError(f"mode {Fraction(m2, 2)} does not live in the {sector} sector")


# ---------------------------------------------------------------------------
# monomials


def _order_key(op):
    return (-op[0], op[1])


def normal_form(factors, sector: str = UNTWISTED):
    """Sort creation operators into canonical order.

    ``factors`` lists ``(generator, mode)`` in written order with every mode
    negative.  Returns ``(sign, monomial)`` or ``None`` when a factor repeats.
    """
    ops = []
    for g, n in factors:
        m2 = to_doubled(n)
        if m2 >= 0:
            raise ValueError(f"creation modes must be negative, got {Fraction(m2, 2)}")
        check_mode_sector(m2, sector)
        ops.append((-m2, g))
    if len(set(ops)) != len(ops):
        return None
    # parity of the sorting permutation by counting inversions
    inversions = 0
    for i in range(len(ops)):
        ki = _order_key(ops[i])
        for j in range(i + 1, len(ops)):
            if _order_key(ops[j]) < ki:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(ops, key=_order_key))


def raw_weight2(mono) -> int:
    return sum(m2 for m2, _ in mono)


def weight(mono, sector: str = UNTWISTED, ground_energy: Fraction | None = None) -> Fraction:
    """Raw weight, or conformal weight when a twisted ground energy is supplied."""
    w = Fraction(raw_weight2(mono), 2)
    if sector == TWISTED and ground_energy is not None:
        w += ground_energy
    return w


def parity(mono) -> int:
    return len(mono) % 2


def _create(g: int, m2: int, mono):
    """h_(-m2/2) applied on the left of a canonical monomial."""
    op = (m2, g)
    key = _order_key(op)
    pos = 0
    for other in mono:
        if other == op:
            return None
        if _order_key(other) < key:
            pos += 1
        else:
            break
    new = mono[:pos] + (op,) + mono[pos:]
    return (-1 if pos % 2 else 1), new


def _annihilate(g: int, m2: int, mono):
    """h_(m2/2), m2 > 0, applied to a monomial: list of (coeff, monomial)."""
    out = []
    for j, (o2, og) in enumerate(mono):
        if o2 != m2:
            continue
        p = pairing(g, og)
        if p:
            c = Fraction(m2 * p, 2)
            if j % 2:
                c = -c
            out.append((c, mono[:j] + mono[j + 1 :]))
    return out


def apply_mode_terms(g: int, m2: int, terms: dict) -> dict:
    """Apply h_(m2/2) to a dict monomial -> coefficient (no sector checks)."""
    out = {}
    if m2 < 0:
        for mono, c in terms.items():
            r = _create(g, -m2, mono)
            if r is not None:
                s, new = r
                v = out.get(new, 0) + (c if s > 0 else -c)
                if v:
                    out[new] = v
                else:
                    del out[new]
    elif m2 > 0:
        for mono, c in terms.items():
            for k, new in _annihilate(g, m2, mono):
                v = out.get(new, 0) + k * c
                if v:
                    out[new] = v
                else:
                    del out[new]
    return out


# ---------------------------------------------------------------------------
# states


class State:
    """Finite exact linear combination of monomials in one sector."""

    __slots__ = ("sector", "d", "terms")

    def __init__(self, sector: str, terms=None, d: int = 1):
        if sector not in SECTORS:
            raise ValueError(f"unknown sector {sector!r}")
        self.sector = sector
        self.d = d
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    # construction helpers -------------------------------------------------
    @classmethod
    def vacuum(cls, d: int = 1) -> "State":
        return cls(UNTWISTED, {(): 1}, d)

    @classmethod
    def theta(cls, d: int = 1) -> "State":
        return cls(TWISTED, {(): 1}, d)

    @classmethod
    def from_monomial(cls, mono, sector: str, d: int = 1, coeff=1) -> "State":
        return cls(sector, {tuple(mono): coeff}, d)

    @classmethod
    def from_factors(cls, factors, sector: str = UNTWISTED, d: int = 1) -> "State":
        """``factors`` as written, e.g. [(gen_e(), -2), (gen_f(), -1)]."""
        r = normal_form(factors, sector)
        if r is None:
            return cls(sector, {}, d)
        s, mono = r
        return cls(sector, {mono: s}, d)

    def zero(self) -> "State":
        return State(self.sector, {}, self.d)

    # arithmetic ---------------------------------------------------------
    def _check(self, other: "State"):
        if not isinstance(other, State):
            raise TypeError("expected a State")
        if other.sector != self.sector or other.d != self.d:
            raise TypeError(f"cannot combine {self.sector} (d={self.d}) with {other.sector} (d={other.d})")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return State(self.sector, out, self.d)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return State(self.sector, {m: -c for m, c in self.terms.items()}, self.d)

    def __mul__(self, c):
        c = Fraction(c)
        return State(self.sector, {m: c * v for m, v in self.terms.items()}, self.d)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, State):
            return NotImplemented
        return self.sector == other.sector and self.d == other.d and self.terms == other.terms

    def __hash__(self):
        return hash((self.sector, self.d, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, mono) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def items(self):
        return self.terms.items()

    # gradings -----------------------------------------------------------
    def weights2(self) -> set:
        return {raw_weight2(m) for m in self.terms}

    def max_weight2(self) -> int:
        return max((raw_weight2(m) for m in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len(self.weights2()) <= 1

    def parity(self) -> int | None:
        ps = {len(m) % 2 for m in self.terms}
        if len(ps) > 1:
            raise ValueError("state mixes parities")
        return ps.pop() if ps else None

    # modes --------------------------------------------------------------
    def apply(self, g: int, n) -> "State":
        return apply_mode(g, n, self)

    # printing -----------------------------------------------------------
    def text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for mono in sorted(self.terms, key=basis_sort_key):
            c = self.terms[mono]
            body = monomial_text(mono, self.sector, self.d)
            if c == 1:
                pieces.append(body)
            elif c == -1:
                pieces.append("-" + body)
            else:
                pieces.append(f"{c}*{body}")
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self):
        return f"State({self.text()})"


def apply_mode(g: int, n, s: State) -> State:
    """h_(n) on a state.  Zero modes act as zero on the untwisted space."""
    m2 = to_doubled(n)
    check_mode_sector(m2, s.sector)
    if g < 0 or g >= 2 * s.d:
        raise ValueError(f"generator {g} is not in the d={s.d} basis")
    return State(s.sector, apply_mode_terms(g, m2, s.terms), s.d)


# ---------------------------------------------------------------------------
# canonical text form


def _mode_text(m2: int) -> str:
    return str(Fraction(-m2, 2))


def monomial_text(mono, sector: str, d: int = 1) -> str:
    vac = "|0>" if sector == UNTWISTED else "|theta>"
    ops = [f"{gen_name(g, d)}({_mode_text(m2)})" for m2, g in mono]
    return " ".join(ops + [vac])


_OP_RE = re.compile(r"([ef]\d*)\(\s*(-?\d+(?:/\d+)?)\s*\)")


def parse_monomial(text: str):
    """Parse the canonical text form; returns (sector, sign, monomial)."""
    text = text.strip()
    if text.endswith("|0>"):
        sector, body = UNTWISTED, text[:-3]
    elif text.endswith("|theta>"):
        sector, body = TWISTED, text[:-7]
    else:
        raise ValueError(f"no highest-weight vector in {text!r}")
    factors = []
    rest = body
    for m in _OP_RE.finditer(body):
        factors.append((parse_gen(m.group(1)), Fraction(m.group(2))))
        rest = rest.replace(m.group(0), "", 1)
    if rest.strip():
        raise ValueError(f"could not parse {rest.strip()!r} in {text!r}")
    r = normal_form(factors, sector)
    if r is None:
        return sector, 0, None
    return sector, r[0], r[1]


# ---------------------------------------------------------------------------
# graded bases


def basis_sort_key(mono):
    return (raw_weight2(mono), len(mono), mono)


def creation_ops(sector: str, d: int, max_weight2: int) -> list:
    start = 1 if sector == TWISTED else 2
    return [(m2, g) for m2 in range(start, max_weight2 + 1, 2) for g in range(2 * d)]


def grade_basis(sector: str, par: int | str | None, max_raw_weight, d: int = 1, exact: bool = False) -> list:
    """All monomials of a parity with raw weight <= max_raw_weight.

    ``par`` is 0/'even', 1/'odd' or None for both.  With ``exact=True`` only
    the monomials of weight exactly ``max_raw_weight`` are returned.  The order
    is by weight, then length, then the monomial tuple.
    """
    if isinstance(par, str):
        par = {"even": 0, "odd": 1}[par]
    top = to_doubled(max_raw_weight)
    if top < 0:
        raise ValueError("max_raw_weight must be non-negative")
    ops = creation_ops(sector, d, top)
    ops.sort(key=_order_key)
    out = []

    def rec(start, chosen, w):
        if par is None or len(chosen) % 2 == par:
            if not exact or w == top:
                out.append(tuple(chosen))
        for i in range(start, len(ops)):
            m2, g = ops[i]
            if w + m2 <= top:
                chosen.append(ops[i])
                rec(i + 1, chosen, w + m2)
                chosen.pop()

    rec(0, [], 0)
    out.sort(key=basis_sort_key)
    return out


def fermion_dimension(n2: int, d: int, sector: str) -> int:
    """Coefficient of q^(n2/2) in prod_k (1 + q^k)^(2d), k over the sector's modes.

    Computed by polynomial multiplication, independently of grade_basis.
    """
    start = 1 if sector == TWISTED else 2
    poly = [0] * (n2 + 1)
    poly[0] = 1
    for m2 in range(start, n2 + 1, 2):
        for _ in range(2 * d):
            for w in range(n2, m2 - 1, -1):
                poly[w] += poly[w - m2]
    return poly[n2]


def all_monomials_upto(sector: str, d: int, max_weight2: int) -> list:
    """Every monomial of doubled weight <= max_weight2 (both parities)."""
    ops = creation_ops(sector, d, max_weight2)
    out = []
    for r in range(len(ops) + 1):
        any_fit = False
        for combo in combinations(ops, r):
            if sum(o[0] for o in combo) <= max_weight2:
                any_fit = True
                out.append(tuple(sorted(combo, key=_order_key)))
        if not any_fit and r > 0:
            break
    out.sort(key=basis_sort_key)
    return out
