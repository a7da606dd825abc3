import pytest

from mcgfloer.algebra import z1, z2
from mcgfloer.bimodule import (Action, DABimodule, Generator, action_grade_defect, check_relations,
                               is_bounded, make_identity, solve_gradings)
from mcgfloer.errors import ArityTooSmall, IdempotentMismatch, Inconsistent
from mcgfloer.seeddata import CORPUS_NAMES, builtin, corpus_grading, graded_builtin


def test_identity_counts():
    assert (len(make_identity(z2()).generators), len(make_identity(z2()).actions)) == (4, 28)
    assert (len(make_identity(z1()).generators), len(make_identity(z1()).actions)) == (2, 6)


def test_identity_and_tau_e_are_sound():
    assert check_relations(make_identity(z2())).passed
    assert check_relations(builtin("N_tauE")).passed


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_corpus_sound(name):
    rep = check_relations(builtin(name))
    assert rep.passed, rep.describe()[:5]


def test_mutation_is_witnessed():
    m = builtin("N_tauE")
    Z = m.left_algebra
    drop = Action("x1", (Z.rho("2"),), Z.rho("23"), "r")
    assert drop in m.actions
    rep = check_relations(m.without_actions([drop]))
    assert not rep.passed
    assert ("x1", (Z.rho("2"), Z.rho("3")), Z.rho("23"), "x1") in rep.violations


def test_max_len_guard():
    with pytest.raises(ArityTooSmall):
        check_relations(builtin("N_tauE"), max_len=1)


def test_action_idempotents_checked():
    Z = z2()
    g = Generator("x", Z.idempotent(0), Z.idempotent(0))
    with pytest.raises(IdempotentMismatch):
        DABimodule(Z, Z, [g], [Action("x", (Z.rho("23"),), Z.rho("56"), "x")])


def test_boundedness():
    rep = is_bounded(builtin("I_bounded"))
    assert rep.bounded and len(rep.order) == 12
    rep = is_bounded(builtin("N_tauE"))
    assert not rep.bounded
    assert rep.cycle[0] == rep.cycle[-1]


def test_grading_identity_all_zero():
    I = make_identity(z2())
    g = solve_gradings([I], normalization=[I])
    assert set(g.generator_grades[I.name].values()) == {0}


def test_grading_tau_e_forced_relation():
    g = corpus_grading()
    gr = g.generator_grades["N_tauE"]
    rho2 = z2().rho("2")
    assert gr["r"] == (gr["x0"] + g.chord_grade(rho2) + 1) % 2
    m = graded_builtin("N_tauE")
    assert all(action_grade_defect(m, a, g.chord_grade) == 0 for a in m.actions)


def test_grading_contradiction():
    # x -> 1 ⊗ y forces gr(y) = gr(x) + 1, x ⊗ (a) -> a ⊗ y forces gr(y) = gr(x)
    Z = z2()
    i0 = Z.idempotent(0)
    a = Z.chord(0, 2)  # both ends in the pair (0, 2)
    gens = [Generator("x", i0, i0), Generator("y", i0, i0)]
    m = DABimodule(Z, Z, gens, [Action("x", (), i0, "y"), Action("x", (a,), a, "y")], name="contradiction")
    with pytest.raises(Inconsistent) as exc:
        solve_gradings([m])
    assert exc.value.witness


def test_corpus_grading_is_consistent():
    g = corpus_grading()
    for name in CORPUS_NAMES:
        assert all(g.action_defect(builtin(name), a) == 0 for a in builtin(name).actions), name
