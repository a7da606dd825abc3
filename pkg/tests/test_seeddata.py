import pytest
from hypothesis import given, settings, strategies as st

from mcgfloer.algebra import z2
from mcgfloer.bimodule import make_identity
from mcgfloer.errors import IdempotentMismatch, SeedSyntaxError, UnknownElement, UnknownName
from mcgfloer.seeddata import (CORPUS_NAMES, available, builtin, default_registry, parse_bimodule,
                               seed_text, serialize_bimodule)

COUNTS = {
    "N_tauA": (5, 32), "N_tauA_inv": (5, 35), "N_tauB": (5, 31), "N_tauB_inv": (5, 36),
    "N_tauC": (16, 74), "N_tauC_inv": (16, 74), "N_tauD": (5, 36), "N_tauD_inv": (5, 31),
    "N_tauE": (5, 35), "N_tauE_inv": (5, 32),
    "N_eta": (5, 32), "N_mu1": (5, 35), "N_mu2": (5, 35), "N_mu3": (5, 35), "N_mu4": (5, 35),
    "N_eta_inv": (5, 30), "I_bounded": (12, 56),
}


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_counts(name):
    m = builtin(name)
    assert (len(m.generators), len(m.actions)) == COUNTS[name]


def test_arc_slide_circles():
    eta = builtin("N_eta")
    assert eta.left_algebra.name == "Z2"
    assert sorted(eta.right_algebra.matching) == [(0, 2), (1, 6), (3, 5), (4, 7)]
    chain = ["N_eta", "N_mu1", "N_mu2", "N_mu3", "N_mu4", "N_eta_inv"]
    for a, b in zip(chain, chain[1:]):
        assert builtin(a).right_algebra is builtin(b).left_algebra


@pytest.mark.parametrize("name", available())
def test_round_trip(name):
    m = builtin(name)
    text = serialize_bimodule(m)
    again = parse_bimodule(text, default_registry().copy())
    assert again == m
    assert serialize_bimodule(again) == text


def test_identity_serialization_counts():
    lines = serialize_bimodule(make_identity(z2())).splitlines()
    assert sum(l.startswith("gen ") for l in lines) == 4
    assert sum(l.startswith("act ") for l in lines) == 28


def test_empty_bimodule_is_header_only():
    m = parse_bimodule("bimodule E left Z2 right Z2\n")
    assert serialize_bimodule(m) == "bimodule E left Z2 right Z2\n"


def test_notations_agree():
    base = "bimodule T left Z2 right Z2\ngen x i1 i1\n"
    forms = ["act x | r23 -> r23 | x", "act x | [1,3] -> [1,3] | x", "act x | |(1->3)| -> r23 | x"]
    parsed = [parse_bimodule(base + f) for f in forms]
    assert parsed[0] == parsed[1] == parsed[2]


def test_one_generator():
    m = parse_bimodule("bimodule G left Z2 right Z2\ngen x i0 i0\n")
    assert list(m.generators) == ["x"] and not m.actions


def test_errors_carry_positions():
    with pytest.raises(IdempotentMismatch, match="line 3"):
        parse_bimodule("bimodule B left Z2 right Z2\ngen x i0 i0\nact x | r23 -> r56 | x\n")
    with pytest.raises(SeedSyntaxError) as exc:
        parse_bimodule("bimodule B left Z2 right Z2\nfoo bar\n")
    assert exc.value.line == 2
    with pytest.raises(UnknownElement):
        parse_bimodule("bimodule B left Z2 right Z2\ngen x i0 i0\nact x | r99 -> 1 | x\n")
    with pytest.raises(UnknownElement):
        parse_bimodule("bimodule B left Z9 right Z2\n")


def test_unknown_builtin():
    with pytest.raises(UnknownName, match="N_tauE"):
        builtin("N_tauF")
    with pytest.raises(UnknownName):
        seed_text("nope")


# random sub-bimodules of the corpus (a subset of actions is still well-formed data)
@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CORPUS_NAMES), st.randoms(use_true_random=False))
def test_round_trip_random_subsets(name, rnd):
    m = builtin(name)
    keep = [a for a in m.sorted_actions if rnd.random() < 0.5]
    sub = m.without_actions([a for a in m.actions if a not in keep])
    assert parse_bimodule(serialize_bimodule(sub), default_registry().copy()) == sub
