"""Sweeps of the vertex algebra axioms over graded bases.

Each sweep returns a small dict that reports count, failures and holds.  The
CLI and the acceptance tests call these functions unchanged.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .fock import TWISTED, UNTWISTED, SECTORS, State, gen_e, gen_f, grade_basis, monomial_text
from .vertex import (
    VertexEngine,
    check_associativity,
    check_commutator,
    check_L_minus1_axiom,
    quadratic_closed_form,
    state_parity,
    virasoro_bracket_check,
)


def _summary(name, checked, failures):
    return {"name": name, "checked": checked, "failures": failures[:20], "holds": not failures}


def virasoro_sweep(V: VertexEngine, max_raw, mn: int = 3, sectors=SECTORS) -> dict:
    """[L_m, L_n] = (m-n)L_{m+n} + (m^3-m)/12 c on every basis state, c = -2d."""
    checked, bad = 0, []
    for sector in sectors:
        for mono in grade_basis(sector, None, max_raw, V.d):
            u = State.from_monomial(mono, sector, V.d)
            for m in range(-mn, mn + 1):
                for n in range(-mn, m):
                    checked += 1
                    if not virasoro_bracket_check(V, m, n, u):
                        bad.append((m, n, monomial_text(mono, sector, V.d)))
    out = _summary(f"Virasoro relations d={V.d}", checked, bad)
    out["central_charge"] = str(central_charge(V))
    return out


def central_charge(V: VertexEngine) -> Fraction:
    """c read off from L_2 L_{-2}|0> = c/2 |0>."""
    vac = V.vacuum()
    return 2 * V.L(2, V.L(-2, vac)).coeff(())


def _mode_for(rng, a: State, sector: str):
    n = rng.randint(-3, 3)
    if sector == TWISTED and state_parity(a):
        return Fraction(2 * n + 1, 2)
    return Fraction(n)


def random_triples(d: int = 1, count: int = 200, max_weight=4, seed: int = 20240601):
    """Deterministic pseudo-random (a1, a2, u, m, n) with basis monomials of raw weight <= max_weight."""
    rng = random.Random(seed)
    ubasis = {s: grade_basis(s, None, max_weight, d) for s in SECTORS}
    vbasis = [m for m in grade_basis(UNTWISTED, None, max_weight, d) if m]
    out = []
    for _ in range(count):
        sector = rng.choice(SECTORS)
        a1 = State.from_monomial(rng.choice(vbasis), UNTWISTED, d)
        a2 = State.from_monomial(rng.choice(vbasis), UNTWISTED, d)
        u = State.from_monomial(rng.choice(ubasis[sector]), sector, d)
        out.append((a1, a2, u, _mode_for(rng, a1, sector), _mode_for(rng, a2, sector)))
    return out


def borcherds_sweep(V: VertexEngine, count: int = 200, max_weight=4, seed: int = 20240601) -> dict:
    """Commutator and associativity formulas on pseudo-random triples.

    Associativity on the twisted space is stated for even a1 only, so odd
    a1 there are checked through the commutator formula alone.
    """
    checked, bad, assoc = 0, [], 0
    for a1, a2, u, m, n in random_triples(V.d, count, max_weight, seed):
        checked += 1
        tag = (a1.text(), a2.text(), u.text(), str(m), str(n))
        if not check_commutator(V, a1, a2, m, n, u):
            bad.append(("commutator",) + tag)
        if u.sector == UNTWISTED or not state_parity(a1):
            assoc += 1
            if not check_associativity(V, a1, a2, int(m), n, u):
                bad.append(("associativity",) + tag)
    out = _summary(f"commutator and associativity d={V.d}", checked, bad)
    out["associativity_checked"] = assoc
    return out


def l_minus1_sweep(V: VertexEngine, max_weight=3) -> dict:
    """(L_{-1}a)_(n) u = -n a_(n-1) u."""
    checked, bad = 0, []
    abasis = [m for m in grade_basis(UNTWISTED, None, max_weight, V.d) if m]
    for sector in SECTORS:
        for umono in grade_basis(sector, None, 2, V.d):
            u = State.from_monomial(umono, sector, V.d)
            for amono in abasis:
                a = State.from_monomial(amono, UNTWISTED, V.d)
                shift = Fraction(1, 2) if sector == TWISTED and len(amono) % 2 else 0
                for n in range(-2, 3):
                    checked += 1
                    if not check_L_minus1_axiom(V, a, n + shift, u):
                        bad.append((monomial_text(amono, UNTWISTED), str(n + shift), monomial_text(umono, sector)))
    return _summary(f"L_-1 derivative d={V.d}", checked, bad)


def closed_form_sweep(V: VertexEngine, max_mn: int = 4, max_raw=3) -> dict:
    """Twisted modes k = -1, 0 of h1_(-m)h2_(-n)|0> against the closed double sums."""
    gens = [gen_e(), gen_f()]
    checked, bad = 0, []
    for umono in grade_basis(TWISTED, None, max_raw, V.d):
        u = State.from_monomial(umono, TWISTED, V.d)
        for h1 in gens:
            for h2 in gens:
                for m in range(1, max_mn + 1):
                    for n in range(1, max_mn + 1):
                        a = State.from_factors([(h1, -m), (h2, -n)], UNTWISTED, V.d)
                        for k in (-1, 0):
                            checked += 1
                            if V.twisted_mode(a, k, u) != quadratic_closed_form(V, h1, m, h2, n, k, u):
                                bad.append((h1, m, h2, n, k, monomial_text(umono, TWISTED)))
    return _summary(f"twisted quadratic closed forms d={V.d}", checked, bad)


def ground_state_report(d: int) -> dict:
    V = VertexEngine(d)
    h = V.ground_energy()
    candidates = {"-1/8": Fraction(-1, 8), "-d/8": Fraction(-d, 8)}
    matches = [k for k, v in candidates.items() if v == h] or ["neither"]
    return {"d": d, "L0_theta": str(h), "matches": matches}
