from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from sfvoa.fock import (
    SECTORS,
    TWISTED,
    UNTWISTED,
    State,
    apply_mode,
    fermion_dimension,
    gen_e,
    gen_f,
    grade_basis,
    monomial_text,
    normal_form,
    pairing,
    parse_monomial,
    raw_weight2,
    to_doubled,
)


def permutation_sign(perm):
    """Sign from the cycle decomposition: (-1)^(n - #cycles)."""
    seen, cycles = set(), 0
    for i in range(len(perm)):
        if i not in seen:
            cycles += 1
            j = i
            while j not in seen:
                seen.add(j)
                j = perm[j]
    return -1 if (len(perm) - cycles) % 2 else 1


@pytest.mark.parametrize("sector", SECTORS)
@pytest.mark.parametrize("d", [1, 2])
def test_basis_sizes_match_generating_function(sector, d):
    for n2 in range(0, 11):
        if sector == UNTWISTED and n2 % 2:
            continue
        count = len(grade_basis(sector, None, Fraction(n2, 2), d, exact=True))
        assert count == fermion_dimension(n2, d, sector), (sector, d, n2)


def test_parity_split_of_basis():
    both = grade_basis(UNTWISTED, None, 4)
    even = grade_basis(UNTWISTED, "even", 4)
    odd = grade_basis(UNTWISTED, 1, 4)
    assert sorted(even + odd) == sorted(both)
    assert all(len(m) % 2 == 0 for m in even)


def test_small_untwisted_dimensions():
    # (1+q)^2 (1+q^2)^2 (1+q^3)^2 (1+q^4)^2 expanded by hand through q^4
    assert [fermion_dimension(2 * n, 1, UNTWISTED) for n in range(5)] == [1, 2, 3, 6, 9]


OPS = [(g, -Fraction(m2, 2)) for m2 in range(1, 8, 2) for g in range(2)]


@given(st.permutations(list(range(6))))
def test_normal_form_sign_is_permutation_sign(perm):
    ops = [OPS[i] for i in range(6)]
    sign0, mono0 = normal_form(ops, TWISTED)
    sign, mono = normal_form([ops[i] for i in perm], TWISTED)
    assert mono == mono0
    assert sign * sign0 == permutation_sign(perm)


def test_repeated_factor_vanishes():
    assert normal_form([(gen_e(), -1), (gen_e(), -1)]) is None
    assert State.from_factors([(gen_f(), -2), (gen_f(), -2)]).is_zero()


def test_canonical_order_examples():
    assert normal_form([(gen_e(), -1), (gen_f(), -1)])[0] == 1
    assert normal_form([(gen_f(), -1), (gen_e(), -1)])[0] == -1
    assert normal_form([(gen_e(), -1), (gen_e(), -2)]) == (-1, ((4, 0), (2, 0)))


def test_mode_sector_checks():
    with pytest.raises(ValueError):
        normal_form([(gen_e(), Fraction(-1, 2))], UNTWISTED)
    with pytest.raises(ValueError):
        normal_form([(gen_e(), 1)])
    with pytest.raises(ValueError):
        to_doubled(Fraction(1, 3))
    with pytest.raises(ValueError):
        apply_mode(gen_e(2), -1, State.vacuum(1))


def test_pairing_table():
    assert pairing(gen_e(), gen_f()) == -1
    assert pairing(gen_f(), gen_e()) == 1
    assert pairing(gen_e(), gen_e()) == 0
    assert pairing(gen_e(1), gen_f(2)) == 0


modes_u = st.integers(-3, 3).filter(lambda n: n != 0)
modes_t = st.sampled_from([Fraction(k, 2) for k in range(-5, 6, 2)])


def _anticommutator_holds(sector, mono, g, h, m, n):
    u = State.from_monomial(mono, sector)
    lhs = apply_mode(g, m, apply_mode(h, n, u)) + apply_mode(h, n, apply_mode(g, m, u))
    rhs = u * (m * pairing(g, h)) if m + n == 0 else u.zero()
    return lhs == rhs


@given(st.sampled_from(grade_basis(UNTWISTED, None, 3)), st.integers(0, 1), st.integers(0, 1), modes_u, modes_u)
def test_untwisted_anticommutator(mono, g, h, m, n):
    assert _anticommutator_holds(UNTWISTED, mono, g, h, m, n)


@given(st.sampled_from(grade_basis(TWISTED, None, Fraction(5, 2))), st.integers(0, 1), st.integers(0, 1), modes_t, modes_t)
def test_twisted_anticommutator(mono, g, h, m, n):
    assert _anticommutator_holds(TWISTED, mono, g, h, m, n)


def test_annihilation_values():
    f1 = State.from_factors([(gen_f(), -1)])
    assert apply_mode(gen_e(), 1, f1) == State.vacuum() * -1
    assert apply_mode(gen_e(), 0, f1).is_zero()
    tf = State.from_factors([(gen_f(), Fraction(-1, 2))], TWISTED)
    assert apply_mode(gen_e(), Fraction(1, 2), tf) == State.theta() * Fraction(-1, 2)


@settings(max_examples=50)
@given(st.sampled_from(grade_basis(TWISTED, None, 4, d=2) + grade_basis(UNTWISTED, None, 4, d=2)))
def test_text_roundtrip(mono):
    sector = TWISTED if any(m2 % 2 for m2, _ in mono) else UNTWISTED
    text = monomial_text(mono, sector, 2)
    s, sign, back = parse_monomial(text)
    assert sign == 1 and back == mono
    assert raw_weight2(back) == raw_weight2(mono)


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_monomial("e(-1) f(-1)")
    with pytest.raises(ValueError):
        parse_monomial("x(-1) |0>")
    assert parse_monomial("e(-1) e(-1) |0>")[1] == 0


def test_state_arithmetic_and_sector_mixing():
    a = State.from_factors([(gen_e(), -1)])
    assert (a + a - a * 2).is_zero()
    with pytest.raises(TypeError):
        a + State.theta()
    assert State.vacuum().text() == "|0>"
