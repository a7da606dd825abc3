import pytest
from hypothesis import given, settings, strategies as st

from mcgfloer.calculus import box_tensor, is_isomorphic, reduce
from mcgfloer.errors import WordSyntaxError
from mcgfloer.mcg import (MCGWord, bimodule_of, check_relation, classify, fixed_point_rank, growth_verdict,
                          hh_of_word, invert_word, parse_word, relation_names, verify_relations)
from mcgfloer.seeddata import builtin

PSI = "A B C D C A B E"
letters = st.sampled_from([(c, s) for c in "ABCDE" for s in (1, -1)])
words = st.lists(letters, max_size=3).map(lambda l: MCGWord(tuple(l)))


def test_parse_examples():
    assert len(parse_word(PSI)) == 8
    assert len(parse_word("A^5 B C D E^5")) == 13
    assert parse_word("") == MCGWord()
    assert parse_word("A' b^-1 C^{2}").letters == (("A", -1), ("B", -1), ("C", 1), ("C", 1))
    assert str(parse_word("A^-2")) == "A' A'"


@pytest.mark.parametrize("bad", ["F", "A B x", "AB", "A^", "A''"])
def test_parse_errors(bad):
    with pytest.raises(WordSyntaxError):
        parse_word(bad)


def test_invert():
    assert str(invert_word(parse_word("A B"))) == "B' A'"
    assert invert_word(MCGWord()) == MCGWord()
    assert invert_word(invert_word(parse_word(PSI))) == parse_word(PSI)


def test_bimodule_of_examples():
    assert is_isomorphic(bimodule_of(parse_word("A A'")), builtin("I")) is not None
    e = bimodule_of(parse_word("E"))
    assert len(e.generators) == 5
    assert is_isomorphic(e, reduce(builtin("N_tauE"))) is not None
    assert is_isomorphic(bimodule_of(parse_word("A B A")), bimodule_of(parse_word("B A B"))) is not None


def test_relation_suite_passes():
    rep = verify_relations()
    kinds = [e.kind for e in rep]
    assert (kinds.count("inverse"), kinds.count("braid"), kinds.count("commute"),
            kinds.count("unit"), kinds.count("arcslide")) == (10, 4, 6, 10, 1)
    assert all(e.passed for e in rep), [e.name for e in rep if not e.passed]
    again = verify_relations()
    assert [e.as_dict() for e in again] == [e.as_dict() for e in rep]


def test_relation_suite_catches_mutation():
    broken = builtin("N_tauA")
    broken = broken.without_actions([broken.sorted_actions[0]])
    seeds = lambda n: broken if n == "N_tauA" else builtin(n)
    assert not check_relation("inverse", "A A'", seeds).passed
    assert check_relation("inverse", "B B'", seeds).passed


def test_empty_selection():
    assert relation_names(()) == []
    assert verify_relations(()) == []


def test_classify_examples():
    c = classify(parse_word(PSI), 6)
    assert c.ranks == [5, 5, 11, 23, 52, 103] and c.verdict == "exponential"
    assert classify(MCGWord(), 4).verdict == "bounded"
    e = classify(parse_word("E"), 4)
    assert e.ranks == [4, 6, 8, 10] and e.verdict == "linear"
    with pytest.raises(ValueError):
        classify(MCGWord(), 2)


def test_growth_verdicts():
    assert growth_verdict([4, 4, 5, 4])[0] == "bounded"
    assert growth_verdict([3, 5, 7, 9, 11])[0] == "linear"
    assert growth_verdict([2, 3, 7, 20, 60])[0] == "exponential"
    assert growth_verdict([1, 9, 2, 14, 3])[0] == "inconclusive"


def test_psi_orientation():
    # both orientations give the same table
    psi = parse_word(PSI)
    fwd = [hh_of_word(psi ** n).total for n in range(1, 5)]
    inv = [fixed_point_rank(psi ** n).total for n in range(1, 5)]
    assert fwd == inv == [5, 5, 11, 23]


@settings(max_examples=15, deadline=None)
@given(words, words)
def test_concatenation(u, v):
    lhs = reduce(box_tensor(bimodule_of(v), bimodule_of(u)))
    assert is_isomorphic(lhs, bimodule_of(u * v)) is not None
