from fractions import Fraction

import pytest

from sfvoa.cache import BasisCache, decode_row, encode_row
from sfvoa.fock import TWISTED, UNTWISTED, State, gen_e, gen_f
from sfvoa.identities import st
from sfvoa.vertex import VertexEngine
from sfvoa.zhu import MODULES, GeneratorSet, ModuleTag, Zhu, default_generators

T_PLUS, T_MINUS, TT_PLUS, TT_MINUS = MODULES


def test_module_tags():
    assert [m.label for m in MODULES] == ["T+", "T-", "Tt+", "Tt-"]
    assert ModuleTag.parse("Tt-") is TT_MINUS
    assert TT_PLUS.twisted and not T_MINUS.twisted
    assert T_MINUS.parity == 1


def test_generator_set_validates_membership():
    with pytest.raises(ValueError):
        GeneratorSet(T_MINUS, [State.vacuum()])
    assert len(default_generators(TT_MINUS).states) == 2


def test_conformal_weights_from_l0(zhu):
    # read off independently as the L_0 eigenvalue of each lowest vector
    for tag in MODULES:
        for u in zhu.omega_space(tag):
            assert zhu.V.L(0, u) == u * zhu.conformal_weight(tag)
    assert [zhu.conformal_weight(t) for t in MODULES] == [0, 1, Fraction(-1, 8), Fraction(3, 8)]


def test_vacuum_is_a_two_sided_unit(zhu):
    vac = State.vacuum()
    for tag in MODULES:
        for mono in zhu.basis(tag, 2):
            u = zhu.state(tag, mono)
            assert zhu.star_left(vac, u) == u
            assert zhu.star_right(u, vac) == u


def test_left_minus_right_is_the_commutator_residue(zhu):
    """a*u - u*a = sum_i binom(|a|-1, i) a_(i) u for |a| >= 1."""
    from sfvoa.exact import binomial_poly

    for a in zhu.gens.values():
        wa = zhu._weight_of(a)
        for tag in (T_MINUS, TT_PLUS, TT_MINUS):
            for mono in zhu.basis(tag, 1):
                u = zhu.state(tag, mono)
                rhs = u.zero()
                for i in range(wa):
                    rhs = rhs + zhu.V.mode(a, i, u) * binomial_poly(wa - 1, i)
                assert zhu.star_left(a, u) - zhu.star_right(u, a) == rhs


def test_translation_plus_weight_lies_in_O(zhu):
    """(L_{-1} + L_0) a = a o |0> for every a in T+."""
    qb = zhu.O_space_basis(T_PLUS, 6)
    for mono in zhu.tplus_basis(4):
        if not mono:
            continue
        a = State.from_monomial(mono, UNTWISTED)
        x = zhu.V.L(-1, a) + zhu.V.L(0, a)
        assert qb.contains(x)


def test_zero_mode_of_omega_is_L0(zhu):
    for tag in MODULES:
        for u in zhu.omega_space(tag):
            assert zhu.o_action(zhu.gens["omega"], u, tag) == u * zhu.conformal_weight(tag)


def test_o_action_rejects_non_lowest_vectors(zhu):
    with pytest.raises(ValueError):
        zhu.o_action(zhu.gens["omega"], st("e(-2) |0>"), T_MINUS)


def test_O_space_empty_below_first_product(zhu):
    # the lightest nonvacuum vector of T+ has weight 2, so a o u needs W >= 3
    assert len(zhu.O_space_basis(T_PLUS, 2)) == 0
    assert len(zhu.O_space_basis(T_PLUS, 3)) > 0


@pytest.mark.parametrize("tag", MODULES)
def test_O_spaces_grow_with_W(zhu, tag):
    small, big = zhu.O_space_basis(tag, 4), zhu.O_space_basis(tag, 6)
    for row in small.span.rows.values():
        assert big.contains(row)


@pytest.mark.parametrize("tag", MODULES)
def test_certificates_are_monotone_in_W(zhu, tag):
    c4 = zhu.verify_generators(tag, W=4, max_raw=3)
    c6 = zhu.verify_generators(tag, W=6, max_raw=3)
    for (name, ok4), (name6, ok6) in zip(c4.results, c6.results):
        assert name == name6
        assert ok6 or not ok4


@pytest.mark.parametrize("tag", MODULES)
def test_L_minus1_lemma_small(zhu, tag):
    r = zhu.check_L_minus1_lemma(tag, 5, 2)
    assert r["holds"] and r["checked"] > 0


def test_wrong_generator_set_fails_certificate(zhu):
    # e alone cannot generate A(T-): f_(-1)|0> is missed
    cert = zhu.verify_generators(T_MINUS, GeneratorSet(T_MINUS, [st("e(-1) |0>")]), W=5, max_raw=2, allow_widen=False)
    assert not cert.passed
    assert "f(-1) |0>" in cert.failures()


def test_zhu_associativity_on_T_minus(zhu):
    """(omega*omega)*h = omega*(omega*h) and (omega*h)*omega = omega*(h*omega) mod O."""
    qb = zhu.O_space_basis(T_MINUS, 6)
    w = zhu.gens["omega"]
    for g in (gen_e(), gen_f()):
        h = State.from_factors([(g, -1)])
        assert qb.contains(zhu.star_left(zhu.star_left(w, w), h) - zhu.star_left(w, zhu.star_left(w, h)))
        assert qb.contains(zhu.star_right(zhu.star_left(w, h), w) - zhu.star_left(w, zhu.star_right(h, w)))


@pytest.mark.parametrize("tag", MODULES)
def test_omega_spaces(zhu, tag):
    r = zhu.verify_omega_space(tag)
    assert r["holds"]
    assert r["dim"] == {T_PLUS: 1, T_MINUS: 2, TT_PLUS: 1, TT_MINUS: 2}[tag]


def test_quadratic_lemmas_small(zhu):
    r = zhu.check_quadratic_reduction_lemmas(2, 1)
    assert r["holds"] and all(v > 0 for v in r["counts"].values())


def test_quotient_dimensions_fingerprint(zhu):
    dims = zhu.quotient_dimensions(T_PLUS, 6)
    assert dims["0"] == 1  # the vacuum never lies in O


# -- cache --------------------------------------------------------------------


def test_row_text_roundtrip(zhu):
    qb = zhu.O_space_basis(TT_MINUS, 4)
    for row in qb.span.rows.values():
        assert decode_row(encode_row(row, TWISTED, 1)) == row


def test_cache_roundtrip_and_hits(tmp_path):
    z1 = Zhu(VertexEngine(1), BasisCache(tmp_path))
    built = z1.O_space_basis(T_MINUS, 5)
    z2 = Zhu(VertexEngine(1), BasisCache(tmp_path))
    loaded = z2.O_space_basis(T_MINUS, 5)
    assert z2.cache.hits == 1 and z2.cache.rebuilds == 0
    assert loaded.span.rows == built.span.rows


def test_corrupted_cache_is_rebuilt(tmp_path, caplog):
    z1 = Zhu(VertexEngine(1), BasisCache(tmp_path))
    built = z1.O_space_basis(T_MINUS, 5)
    path = z1.cache.path(1, "T-", Fraction(5))
    text = path.read_text().split("\n")
    text[1] = text[1].replace("1*", "2*", 1)
    path.write_text("\n".join(text))
    z2 = Zhu(VertexEngine(1), BasisCache(tmp_path))
    with caplog.at_level("WARNING"):
        rebuilt = z2.O_space_basis(T_MINUS, 5)
    assert z2.cache.rebuilds == 1 and z2.cache.hits == 0
    assert "rejected" in caplog.text
    assert rebuilt.span.rows == built.span.rows


def test_cache_with_consistent_but_wrong_rows_fails_spot_check(tmp_path):
    """A file with a valid hash but a too-small span is caught by recomputation."""
    import hashlib

    z1 = Zhu(VertexEngine(1), BasisCache(tmp_path))
    z1.O_space_basis(T_MINUS, 5)
    path = z1.cache.path(1, "T-", Fraction(5))
    lines = path.read_text().split("\n")
    body_lines = [l for l in lines[1:] if l][:1]
    body = "\n".join(body_lines)
    header = lines[0].split()
    header = [f"rows={len(body_lines)}" if h.startswith("rows=") else
              f"sha256={hashlib.sha256(body.encode()).hexdigest()}" if h.startswith("sha256=") else h for h in header]
    path.write_text(" ".join(header) + "\n" + body + "\n")
    z2 = Zhu(VertexEngine(1), BasisCache(tmp_path))
    z2.O_space_basis(T_MINUS, 5)
    assert z2.cache.rebuilds == 1
