"""Words, presentations, LOG-presentations, quotients and the text formats."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logkit.log_model import InvalidParameterError
from logkit.presentation import (
    InvalidExponentError,
    Presentation,
    PresentationError,
    PresentationParseError,
    UnknownGeneratorError,
    Word,
    braid_quotient,
    edge_relator,
    format_presentation,
    log_presentation,
    looks_like_presentation,
    parse_presentation,
    to_sympy,
    with_all_powers,
    with_power,
)

letters = st.tuples(st.sampled_from(["a", "b", "c"]), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=12).map(lambda ls: Word(tuple(ls)))


# --- Words -------------------------------------------------------------------


class TestWord:
    def test_parse_expands_powers(self):
        w = Word.parse("a^3 b^-2")
        assert w.letters == (("a", 1),) * 3 + (("b", -1),) * 2

    def test_str_collapses_runs(self):
        assert str(Word.parse("a a a b^-1 b^-1")) == "a^3 b^-2"
        assert str(Word()) == "1"

    def test_parse_accepts_star_and_identity(self):
        assert Word.parse("a*b * 1") == Word.of(("a", 1), ("b", 1))

    @pytest.mark.parametrize("text", ["a^", "a^x", "a|b", "#"])
    def test_parse_rejects_bad_tokens(self, text):
        with pytest.raises(PresentationParseError):
            Word.parse(text)

    def test_sign_must_be_unit(self):
        with pytest.raises(PresentationError):
            Word((("a", 2),))

    def test_relators_are_kept_as_given(self):
        rel = edge_relator("a", "b", "c")
        assert str(rel) == "a b c^-1 b^-1"
        assert rel.is_cyclically_reduced()

    def test_cyclic_reduce(self):
        assert str(Word.parse("b a c a^-1 b^-1").cyclic_reduce()) == "c"
        assert str(Word.parse("a b b^-1 a^-1").free_reduce()) == "1"

    def test_rotations(self):
        w = Word.parse("a b c")
        assert [str(r) for r in w.rotations()] == ["a b c", "b c a", "c a b"]

    def test_single_generator_power(self):
        assert Word.parse("g^-4").single_generator_power() == ("g", -4)
        assert Word.parse("g h").single_generator_power() is None
        assert Word().single_generator_power() is None

    @given(words)
    def test_word_times_inverse_reduces_to_identity(self, w):
        assert not (w * w.inverse()).free_reduce()

    @given(words)
    def test_reductions_are_idempotent(self, w):
        assert w.free_reduce().free_reduce() == w.free_reduce()
        assert w.cyclic_reduce().is_cyclically_reduced()

    @given(words)
    def test_exponent_sums_survive_reduction(self, w):
        r = w.cyclic_reduce()
        for g in "abc":
            assert r.exponent_sum(g) == w.exponent_sum(g)


# --- Presentations -----------------------------------------------------------


def test_log_presentation(trefoil_p):
    assert trefoil_p.generators == ("a", "b", "c")
    assert [str(r) for r in trefoil_p.relators] == ["a b c^-1 b^-1", "b c a^-1 c^-1"]


def test_presentation_rejects_unknown_generators():
    with pytest.raises(UnknownGeneratorError):
        Presentation(("a",), (Word.parse("a b"),))


def test_presentation_rejects_duplicate_generators():
    with pytest.raises(PresentationError):
        Presentation(("a", "a"))


def test_exponent_matrix(trefoil_p):
    assert trefoil_p.exponent_matrix() == [[1, 0, -1], [-1, 1, 0]]


def test_with_power_appends_one_relator(trefoil_p):
    q = with_power(trefoil_p, "b", 4)
    assert q.relators[-1] == Word.power("b", 4)
    assert len(q.relators) == 3


@pytest.mark.parametrize(
    "gen,n,error",
    [
        ("z", 3, UnknownGeneratorError),
        ("a", 0, InvalidExponentError),
        ("a", -2, InvalidExponentError),
    ],
)
def test_with_power_errors(trefoil_p, gen, n, error):
    with pytest.raises(error):
        with_power(trefoil_p, gen, n)


def test_with_all_powers_follows_generator_order(trefoil_p):
    q = with_all_powers(trefoil_p, 3)
    assert [str(r) for r in q.relators[2:]] == ["a^3", "b^3", "c^3"]


def test_braid_quotient_relators():
    p = braid_quotient(4, 5)
    assert p.generators == ("s1", "s2", "s3")
    # two braid relations, one commutation, one power
    assert len(p.relators) == 4
    assert str(p.relators[-1]) == "s1^5"


@pytest.mark.parametrize("m,n,error", [(1, 3, InvalidParameterError), (3, 0, InvalidExponentError)])
def test_braid_quotient_errors(m, n, error):
    with pytest.raises(error):
        braid_quotient(m, n)


# --- Text formats ------------------------------------------------------------


def test_plain_format(trefoil_p):
    assert format_presentation(trefoil_p) == (
        "gen: a b c\nrel: a b c^-1 b^-1\nrel: b c a^-1 c^-1\n"
    )


def test_plain_format_reads_back(trefoil_p):
    assert parse_presentation(format_presentation(with_all_powers(trefoil_p, 3))) == (
        with_all_powers(trefoil_p, 3)
    )


def test_algebra_format(trefoil_p):
    text = format_presentation(trefoil_p, "algebra")
    assert text.splitlines() == [
        'F := FreeGroup("a", "b", "c");;',
        "a := F.1;;",
        "b := F.2;;",
        "c := F.3;;",
        "G := F / [ a*b*c^-1*b^-1, b*c*a^-1*c^-1 ];;",
    ]


def test_algebra_format_falls_back_to_indices_for_numeric_names(family11):
    text = format_presentation(log_presentation(family11), "algebra")
    assert "F.1*F.4*F.2^-1*F.4^-1" in text


def test_unknown_format(trefoil_p):
    with pytest.raises(ValueError, match="unknown format"):
        format_presentation(trefoil_p, "latex")


@pytest.mark.parametrize("text", ["", "# nothing\n", "foo: a\n"])
def test_parse_presentation_errors(text):
    with pytest.raises(PresentationParseError):
        parse_presentation(text)


def test_looks_like_presentation():
    assert looks_like_presentation("# header\ngen: a\n")
    assert not looks_like_presentation("a | b | c\n")


# --- Cross-check against sympy ----------------------------------------------


@pytest.mark.parametrize("n,order", [(2, 6), (3, 24)])
def test_power_quotient_order_matches_sympy(trefoil_p, n, order):
    assert to_sympy(with_all_powers(trefoil_p, n)).order() == order


def test_braid_quotient_order_matches_sympy():
    assert to_sympy(braid_quotient(3, 2)).order() == 6
