import random

import pytest

from charcoords.exact import Matrix, NumberField
from charcoords.manifold import (
    HolonomyLift, LiftError, ManifoldParseError, Presentation, check_relators, free_reduce, invert_word,
    load_manifold, parse_manifold, peripheral_parabolic_check, peripheral_word, rho_n_of_word,
)
from charcoords.rep import h_plus, nilpotent_exp, sym_power

FIG8_TEXT = """
field: 1,-1,1
gens: a b
rel: AbaBabABaB
cusp: a bABaaBAb
mat a: 1 1 0 1
mat b: 1 0 0,1 1
"""


def test_builtin_figure_eight(fig8):
    assert fig8.presentation.generators == ("a", "b")
    assert len(fig8.presentation.relators) == 1
    assert check_relators(fig8.presentation, fig8.lift) == [("AbaBabABaB", 1)]


def test_parse_matches_builtin(fig8):
    m = parse_manifold(FIG8_TEXT)
    assert m.lift.matrices == fig8.lift.matrices
    assert m.presentation == fig8.presentation


def test_meridian_trace_and_normalization(fig8):
    rep = peripheral_parabolic_check(fig8.presentation, fig8.lift)
    assert rep.meridian_trace == 2
    assert rep.longitude_trace == -2
    assert rep.lift.image(rep.meridian) == Matrix([[1, 1], [0, 1]])
    K = NumberField([1, -1, 1], "w")
    assert rep.tau == K([2, -4])
    assert rep.cusp.sign_m == 1 and rep.cusp.sign_l == -1
    M = fig8.lift.image(rep.meridian)
    L = fig8.lift.image(rep.longitude)
    assert M @ L == L @ M


def test_normalization_is_idempotent(fig8):
    first = peripheral_parabolic_check(fig8.presentation, fig8.lift)
    second = peripheral_parabolic_check(fig8.presentation, first.lift)
    assert second.tau == first.tau
    assert second.lift.image("a") == first.lift.image("a")


def test_trivial_presentation_passes_vacuously():
    pres = Presentation(("a",))
    lift = HolonomyLift({"a": Matrix([[1, 1], [0, 1]])})
    assert check_relators(pres, lift) == []


def test_corrupted_entry_is_reported(fig8):
    mats = dict(fig8.lift.matrices)
    mats["b"] = Matrix([[1, 0], [fig8.lift.field([0, 2]), 1]])
    with pytest.raises(LiftError, match="AbaBabABaB"):
        check_relators(fig8.presentation, HolonomyLift(mats, fig8.lift.field))


def test_minus_relator_sign():
    pres = Presentation(("a",), ("aa",))
    lift = HolonomyLift({"a": Matrix([[0, -1], [1, 0]])})
    assert check_relators(pres, lift) == [("aa", -1)]


def test_non_parabolic_peripheral_rejected():
    pres = Presentation(("a", "b"), (), (("a", "b"),))
    lift = HolonomyLift({"a": Matrix([[2, 1], [1, 1]]), "b": Matrix([[1, 1], [0, 1]])})
    with pytest.raises(LiftError, match="trace"):
        peripheral_parabolic_check(pres, lift)


def test_non_commuting_pair_rejected():
    pres = Presentation(("a", "b"), (), (("a", "b"),))
    lift = HolonomyLift({"a": Matrix([[1, 1], [0, 1]]), "b": Matrix([[1, 0], [-4, 1]])})
    with pytest.raises(LiftError, match="commute"):
        peripheral_parabolic_check(pres, lift)


def test_real_cusp_shape_rejected():
    pres = Presentation(("a", "b"), (), (("a", "b"),))
    lift = HolonomyLift({"a": Matrix([[1, 1], [0, 1]]), "b": Matrix([[1, 3], [0, 1]])})
    with pytest.raises(LiftError, match="real"):
        peripheral_parabolic_check(pres, lift)


def test_rho_n_examples(fig8):
    rep = peripheral_parabolic_check(fig8.presentation, fig8.lift)
    for n in range(2, 6):
        assert rho_n_of_word(fig8.lift, n, "") == Matrix.identity(n)
        assert rho_n_of_word(rep.lift, n, rep.meridian) == nilpotent_exp(h_plus(n))
        assert rho_n_of_word(fig8.lift, n, "AbaBabABaB") == Matrix.identity(n)


def test_rho_n_is_a_homomorphism_on_words(fig8):
    rng = random.Random(5)
    letters = "aAbB"
    for _ in range(5):
        u = "".join(rng.choice(letters) for _ in range(4))
        v = "".join(rng.choice(letters) for _ in range(3))
        for n in (2, 3):
            assert rho_n_of_word(fig8.lift, n, u + v) == rho_n_of_word(fig8.lift, n, u) @ rho_n_of_word(fig8.lift, n, v)
        assert rho_n_of_word(fig8.lift, 3, u) == sym_power(fig8.lift.image(u), 3)


def test_undefined_generator():
    lift = HolonomyLift({"a": Matrix([[1, 1], [0, 1]])})
    with pytest.raises(KeyError):
        rho_n_of_word(lift, 2, "ab")
    with pytest.raises(KeyError):
        Presentation(("a",), ("ab",))


def test_words():
    assert free_reduce("aAbBa") == "a"
    assert free_reduce("abBA") == ""
    assert invert_word("abA") == "aBA"
    pres = Presentation(("a", "b"), (), (("a", "bA"),))
    assert peripheral_word(pres, (2, -1)) == "aaaB"


@pytest.mark.parametrize(
    "text, line, message",
    [
        ("gens: a b\nrel: abc\n", 2, "unknown generator"),
        ("gens: a\nmat a: 1 1 0\n", 2, "expected 4 entries"),
        ("gens: a\nmat a: 1 1 1 1\n", 2, "determinant"),
        ("gens: a\nmat a: 1 x 0 1\n", 2, "bad number"),
        ("gens: a\nbogus: 1\n", 2, "unknown directive"),
        ("rel: ab\n", 1, "before 'gens:'"),
        ("# only a comment\ngens: A\n", 2, "lowercase"),
        ("gens: a\n", 1, "no matrix"),
        ("gens: a\nmat a: 1 0,1 0 1\n", 2, "field"),
        ("gens: a\nfield: 1,0,1\n", 2, "precede"),
        ("gens: a b\ncusp: a\n", 2, "takes 2"),
        ("gens: a\nthis line has no colon\n", 2, "key: value"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, message):
    with pytest.raises(ManifoldParseError, match=message) as info:
        parse_manifold(text, "bad.txt")
    assert info.value.lineno == line
    assert f"bad.txt:{line}:" in str(info.value)


def test_load_from_file(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text(FIG8_TEXT)
    m = load_manifold(path)
    assert check_relators(m.presentation, m.lift) == [("AbaBabABaB", 1)]
