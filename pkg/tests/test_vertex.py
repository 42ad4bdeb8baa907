from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from sfvoa.checks import (
    borcherds_sweep,
    central_charge,
    closed_form_sweep,
    ground_state_report,
    l_minus1_sweep,
    random_triples,
    virasoro_sweep,
)
from sfvoa.fock import TWISTED, UNTWISTED, State, apply_mode, gen_e, gen_f, grade_basis
from sfvoa.vertex import (
    DELTA_LITERAL,
    VertexEngine,
    check_associativity,
    state_parity,
    state_weight,
    strong_generators,
)

HALF = Fraction(1, 2)
UBASIS = grade_basis(UNTWISTED, None, 3)
TBASIS = grade_basis(TWISTED, None, Fraction(5, 2))
VBASIS = [m for m in grade_basis(UNTWISTED, None, 3) if m]


def st_u(mono):
    return State.from_monomial(mono, UNTWISTED)


def st_t(mono):
    return State.from_monomial(mono, TWISTED)


@given(st.sampled_from(UBASIS + TBASIS), st.integers(-3, 3))
def test_vacuum_acts_as_identity(engine, mono, n):
    sector = TWISTED if any(m2 % 2 for m2, _ in mono) else UNTWISTED
    u = State.from_monomial(mono, sector)
    out = engine.mode(engine.vacuum(), n, u)
    assert out == (u if n == -1 else u.zero())


@given(st.sampled_from(VBASIS))
def test_creation_property(engine, mono):
    a = st_u(mono)
    assert engine.mode(a, -1, engine.vacuum()) == a
    for n in range(0, 3):
        assert engine.mode(a, n, engine.vacuum()).is_zero()


@given(st.sampled_from(UBASIS), st.integers(0, 1), st.integers(-3, 3))
def test_generator_field_is_the_free_mode(engine, mono, g, n):
    assert engine.mode(engine.gen_state(g), n, st_u(mono)) == apply_mode(g, n, st_u(mono))


@given(st.sampled_from(TBASIS), st.integers(0, 1), st.sampled_from([Fraction(k, 2) for k in range(-5, 6, 2)]))
def test_twisted_generator_field_is_the_free_mode(engine, mono, g, n):
    # Delta contracts an e with an f, so a single generator is untouched
    assert engine.mode(engine.gen_state(g), n, st_t(mono)) == apply_mode(g, n, st_t(mono))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(VBASIS), st.sampled_from(VBASIS), st.integers(-2, 2))
def test_skew_symmetry(engine, amono, bmono, n):
    """a_(n)b = (-1)^{|a||b|} sum_j (-1)^{n+j+1} L_{-1}^j/j! b_(n+j)a."""
    a, b = st_u(amono), st_u(bmono)
    lhs = engine.mode(a, n, b)
    eps = -1 if state_parity(a) and state_parity(b) else 1
    top = int(state_weight(a) + state_weight(b))
    rhs = a.zero()
    for j in range(0, top - n + 2):
        term = engine.mode(b, n + j, a)
        for _ in range(j):
            term = engine.L(-1, term)
        sign = -1 if (n + j + 1) % 2 else 1
        rhs = rhs + term * Fraction(eps * sign, factorial(j))
    assert lhs == rhs


def test_omega_is_conformal(engine):
    w = engine.omega()
    assert engine.L(0, w) == w * 2
    assert engine.L(1, w).is_zero()
    assert engine.L(2, w) == engine.vacuum() * -1  # c/2 with c = -2


@pytest.mark.parametrize("d", [1, 2])
def test_central_charge(d):
    assert central_charge(VertexEngine(d)) == -2 * d


def test_l0_is_weight_operator(engine):
    for mono in UBASIS:
        u = st_u(mono)
        assert engine.L(0, u) == u * state_weight(u)
    for mono in TBASIS:
        u = st_t(mono)
        assert engine.L(0, u) == u * (state_weight(u) - Fraction(1, 8))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_twisted_ground_energy_is_additive_in_d(d):
    # the rank-d space is d commuting copies of rank one, so energies add
    assert VertexEngine(d).ground_energy() == Fraction(-d, 8)


def test_literal_delta_convention_differs():
    assert VertexEngine(1, DELTA_LITERAL).ground_energy() != Fraction(-1, 8)
    with pytest.raises(ValueError):
        VertexEngine(1, "other")


def test_ground_state_report():
    rep = ground_state_report(2)
    assert rep["L0_theta"] == "-1/4"
    assert rep["matches"] == ["-d/8"]


def test_strong_generators_shape():
    g = strong_generators(1)
    assert g["omega"] == VertexEngine(1).omega()
    e2e1 = State.from_factors([(gen_e(), -2), (gen_e(), -1)])
    assert g["E"] == e2e1
    # H = 1/2 (e_(-2) f + f_(-2) e)
    h = (State.from_factors([(gen_e(), -2), (gen_f(), -1)]) + State.from_factors([(gen_f(), -2), (gen_e(), -1)])) * HALF
    assert g["H"] == h


def test_mode_rejects_wrong_sector(engine):
    with pytest.raises(ValueError):
        engine.mode(engine.gen_state(gen_e()), 0, engine.theta())


def test_twisted_associativity_needs_even_a1(engine):
    a = engine.gen_state(gen_e())
    with pytest.raises(ValueError):
        check_associativity(engine, a, a, 0, HALF, engine.theta())


def test_random_triples_are_deterministic():
    x = random_triples(1, 10)
    y = random_triples(1, 10)
    assert [(a.text(), b.text(), u.text(), m, n) for a, b, u, m, n in x] == \
        [(a.text(), b.text(), u.text(), m, n) for a, b, u, m, n in y]


def test_small_sweeps(engine):
    assert virasoro_sweep(engine, 3, 2)["holds"]
    assert borcherds_sweep(engine, 30, 3)["holds"]
    assert l_minus1_sweep(engine, 2)["holds"]
    assert closed_form_sweep(engine, 2, 2)["holds"]


def test_d2_sweeps(engine2):
    assert virasoro_sweep(engine2, 2, 2)["holds"]
    assert borcherds_sweep(engine2, 20, 3)["holds"]
