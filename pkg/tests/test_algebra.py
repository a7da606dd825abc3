import itertools

import pytest
from hypothesis import given, strategies as st

from mcgfloer.algebra import basis, build_circle, idempotent_of, multiply, z1, z2
from mcgfloer.errors import MixedCircles, NotAPartition, SurgeryDisconnected

Z2_PAIRS = [(0, 2), (1, 3), (4, 6), (5, 7)]


def oracle_product(x, y, pairs):
    """Paths in the linear quiver 0 -> 1 -> ... -> 7, idempotents as pair projectors.

    Elements are ("e", pair) or ("c", a, b).  Written without reference to
    the package so it can be compared against the lookup table.
    """
    def left(e):
        return e[1] if e[0] == "e" else next(p for p in pairs if e[1] in p)

    def right(e):
        return e[1] if e[0] == "e" else next(p for p in pairs if e[2] in p)

    if right(x) != left(y):
        return None
    if x[0] == "e":
        return y
    if y[0] == "e":
        return x
    return ("c", x[1], y[2]) if x[2] == y[1] else None


def as_oracle(e):
    return ("e", Z2_PAIRS[e.pair]) if e.is_idempotent else ("c", e.start, e.end)


def test_z2_matching_and_counts():
    Z = z2()
    assert sorted(Z.matching) == Z2_PAIRS
    assert len(basis(Z)) == 32
    assert len(Z.idempotents) == 4 and len(Z.chords) == 28


def test_z1_basis():
    Z = z1()
    assert len(basis(Z)) == 8
    assert sorted((c.start, c.end) for c in Z.chords) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_bad_circles():
    with pytest.raises(SurgeryDisconnected):
        build_circle(4, [(0, 1), (2, 3)], "bad")
    with pytest.raises(NotAPartition):
        build_circle(4, [(0, 1), (1, 3)], "bad2")
    assert build_circle(4, [(0, 2), (1, 3)], "torus").num_points == 4


def test_multiplication_matches_quiver_oracle():
    Z = z2()
    for x, y in itertools.product(Z.elements, repeat=2):
        got = multiply(x, y)
        want = oracle_product(as_oracle(x), as_oracle(y), Z2_PAIRS)
        assert (None if got is None else as_oracle(got)) == want, (x, y)


def test_named_products():
    Z = z2()
    assert multiply(Z.rho("4"), Z.rho("5")) is Z.rho("45")
    assert multiply(Z.rho("3"), Z.rho("2")) is None
    assert multiply(Z.idempotent(0), Z.rho("1")) is Z.rho("1")
    assert multiply(Z.idempotent(1), Z.rho("1")) is None


def test_idempotent_of():
    Z = z2()
    assert idempotent_of(Z.rho("4"), "left") is Z.idempotent(1)
    assert idempotent_of(Z.rho("4"), "right") is Z.idempotent(2)
    r56 = Z.chord(4, 6)
    assert idempotent_of(r56, "left") is Z.idempotent(2) is idempotent_of(r56, "right")
    assert idempotent_of(Z.idempotent(3), "left") is Z.idempotent(3)


def test_element_notations():
    Z = z2()
    assert Z.parse_element("r23") is Z.chord(1, 3) is Z.parse_element("[1,3]")
    assert Z.parse_element("|(1->3)|") is Z.chord(1, 3)
    assert Z.parse_element("i2") is Z.idempotent(2)


def test_mixed_circles():
    with pytest.raises(MixedCircles):
        multiply(z1().chords[0], z2().chords[0])


elements = st.sampled_from(z2().elements)


@given(elements, elements, elements)
def test_associative(a, b, c):
    ab = multiply(a, b)
    bc = multiply(b, c)
    lhs = None if ab is None else multiply(ab, c)
    rhs = None if bc is None else multiply(a, bc)
    assert lhs is rhs
