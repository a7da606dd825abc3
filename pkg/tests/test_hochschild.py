import pytest
from hypothesis import given, settings, strategies as st

from mcgfloer.calculus import box_tensor, reduce
from mcgfloer.errors import AlgebraMismatch, NonStabilized
from mcgfloer.hochschild import _Builder, bar_truncation, hh_rank, sandwich_product
from mcgfloer.mcg import MCGWord, bimodule_of, fixed_point_rank, hh_of_word, invert_word, parse_word
from mcgfloer.seeddata import builtin

SECTION_WORDS = ["", "A", "A'", "B", "B'", "C", "C'", "D", "D'", "E", "E'", "A B C D", "A^5 B C D E^5"]
letters = st.sampled_from([(c, s) for c in "ABCDE" for s in (1, -1)])
words = st.lists(letters, max_size=4).map(lambda l: MCGWord(tuple(l)))


def test_identity_k0_complex():
    c = bar_truncation(builtin("I"), 0)
    # idempotent coefficients plus the four chords with both ends in one pair
    assert len(c.basis) == 8
    assert not any(c.columns)


def test_identity_k1_d_squared_and_k0_image():
    c = bar_truncation(builtin("I"), 1)
    assert c.check_d_squared()
    b = _Builder(builtin("I"))
    for _ in range(4):
        b.add_level()
    # the K=0 classes already map onto a rank-4 image, and it persists
    assert [b.persistent_rank(0, k) for k in (1, 2, 3)] == [4, 4, 4]


def test_tau_e_k2_d_squared():
    assert bar_truncation(builtin("N_tauE"), 2).check_d_squared()
    assert bar_truncation(builtin("N_tauE"), 3, bar="koszul").check_d_squared()


@pytest.mark.parametrize("word,total", [("", 4), ("A", 4), ("A'", 4), ("B", 4), ("B'", 4), ("C", 4), ("C'", 4),
                                        ("D", 4), ("D'", 4), ("E", 4), ("E'", 4),
                                        ("A B C D", 1), ("A^5 B C D E^5", 10)])
def test_fixed_point_ranks(word, total):
    res = fixed_point_rank(parse_word(word), check_d2=True)
    assert res.total == total
    assert res.notes and "exact" in res.notes[0]


@pytest.mark.parametrize("word", SECTION_WORDS)
def test_sandwich_agrees(word):
    w = invert_word(parse_word(word))
    plain = hh_of_word(w).total
    sw = hh_of_word(w, sandwich=True)
    assert sw.total == plain


def test_graded_identity():
    res = hh_of_word(parse_word(""), graded=True)
    assert res.graded == {0: 4, 1: 0}


@pytest.mark.parametrize("word,graded", [("A B C D", {0: 1, 1: 0}), ("A^5 B C D E^5", {0: 1, 1: 9}),
                                         ("A B C D C A B E", {0: 1, 1: 4})])
def test_graded_words(word, graded):
    assert fixed_point_rank(parse_word(word), graded=True).graded == graded


def test_full_bar_route():
    assert fixed_point_rank(parse_word("E"), bar="full").total == 4
    assert fixed_point_rank(parse_word("A B C D"), bar="full", K_start=4, K_max=7).total == 1


def test_full_bar_non_stabilized_report():
    with pytest.raises(NonStabilized) as exc:
        hh_rank(bimodule_of(parse_word("A B C D")), bar="full", K_start=6, K_max=5)
    assert exc.value.trajectory


def test_two_algebras_rejected():
    with pytest.raises(AlgebraMismatch):
        hh_rank(builtin("N_eta"))


def test_sandwich_is_bounded_for_tau_e():
    from mcgfloer.bimodule import is_bounded
    assert is_bounded(sandwich_product(builtin("N_tauE"), builtin("I_bounded"))).bounded


@settings(max_examples=15, deadline=None)
@given(letters, letters)
def test_reduction_invariance(a, b):
    name = lambda l: "N_tau%s%s" % (l[0], "" if l[1] > 0 else "_inv")
    raw = box_tensor(builtin(name(a)), builtin(name(b)))
    assert hh_rank(raw, check_d2=True).total == hh_rank(reduce(raw)).total


@settings(max_examples=15, deadline=None)
@given(words, st.integers(0, 3))
def test_rotation_invariance(w, k):
    if not w.letters:
        return
    k %= len(w.letters)
    rotated = MCGWord(w.letters[k:] + w.letters[:k])
    assert hh_of_word(w).total == hh_of_word(rotated).total


@settings(max_examples=15, deadline=None)
@given(words, letters)
def test_conjugation_invariance(w, c):
    cw = MCGWord((c,) + w.letters + ((c[0], -c[1]),))
    assert hh_of_word(w).total == hh_of_word(cw).total


@settings(max_examples=10, deadline=None)
@given(words)
def test_sandwich_invariance_sampled(w):
    assert hh_of_word(w, sandwich=True).total == hh_of_word(w).total
