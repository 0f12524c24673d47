"""Group catalog, conjugacy data, and class-vector parsing."""

import pytest

from hurwitz.errors import BudgetError, ValidationError
from hurwitz.groups import (
    Sl2Group,
    VectorSemidirectGroup,
    alternating,
    class_power,
    cycle_type,
    dihedral,
    make_group,
    normalizer_in_sym,
    parse_class_vector,
    parse_perm,
    perm_inv,
    perm_mul,
    symmetric,
)


def sl2_order(m):
    # |SL2(Z/m)| = m^3 * prod over primes p | m of (1 - p^-2)
    n = m ** 3
    p, rest = 2, m
    while rest > 1:
        if rest % p == 0:
            n = n * (p * p - 1) // (p * p)
            while rest % p == 0:
                rest //= p
        p += 1
    return n


def test_perm_composition_applies_left_factor_first():
    a = parse_perm("(1,2)", 3)
    b = parse_perm("(2,3)", 3)
    ab = perm_mul(a, b)
    # 1 -> 2 under a, then 2 -> 3 under b
    assert ab[0] == 2
    assert perm_mul(ab, perm_inv(ab)) == (0, 1, 2)


def test_cycle_type():
    assert cycle_type(parse_perm("(1,2,3)(4,5)", 6)) == (3, 2, 1)


@pytest.mark.parametrize(
    "desc,order",
    [("A4", 12), ("A5", 60), ("S4", 24), ("D5", 10), ("D13", 26)],
)
def test_catalog_orders(desc, order):
    assert make_group(desc).order == order


@pytest.mark.parametrize("m", [3, 5, 9])
def test_sl2_orders(m):
    assert Sl2Group(m).order == sl2_order(m)


def test_order_bound_is_enforced():
    with pytest.raises(BudgetError):
        make_group("SL2(9)", order_bound=100)


def test_identity_and_inverses(a4):
    e = a4.identity
    for g in a4.elements:
        assert a4.mul(g, a4.inv(g)) == e
        assert a4.mul(e, g) == g


def test_a4_conjugacy_classes(a4):
    classes = a4.conjugacy_classes()
    assert [c.label for c in classes] == ["1a", "2a", "3a", "3b"]
    assert [c.size for c in classes] == [1, 3, 4, 4]
    assert [c.element_order for c in classes] == [1, 2, 3, 3]


def test_a5_class_sizes():
    sizes = sorted(c.size for c in make_group("A5").conjugacy_classes())
    assert sizes == [1, 12, 12, 15, 20]


def test_element_order(a4):
    three = a4.parse("(1,2,3)")
    assert a4.element_order(three) == 3
    assert a4.element_order(a4.identity) == 1


def test_generate_subgroup(a4):
    v4 = a4.generate_subgroup([a4.parse("(1,2)(3,4)"), a4.parse("(1,3)(2,4)")])
    assert v4.order == 4
    assert a4.subgroup_order([a4.parse("(1,2,3)")]) == 3


def test_class_vector_parsing(a4, a4_cv):
    assert a4_cv.r == 4
    assert list(a4_cv.labels()) == ["3a", "3a", "3b", "3b"]
    assert str(a4_cv) == "[3a,3a,3b,3b]"
    same = parse_class_vector(a4, "[3b,3a,3b,3a]")
    assert same == a4_cv  # order does not matter
    with pytest.raises(ValidationError):
        parse_class_vector(a4, "[3a,9z]")


def test_class_vector_from_representatives(a4, a4_cv):
    cv = parse_class_vector(a4, "[(1,2,3),(1,2,3),(1,3,2),(1,3,2)]")
    assert cv == a4_cv or sorted(cv.labels()) == sorted(a4_cv.labels())


def test_class_power(a4, a4_cv):
    assert class_power(a4_cv, 2) == a4_cv  # squaring swaps 3a and 3b
    single = parse_class_vector(a4, "[3a,3a,3a,3a]")
    assert class_power(single, 2) != single
    assert class_power(single, 4) == single


def test_dihedral_reflection_class():
    d5 = dihedral(5)
    classes = d5.conjugacy_classes()
    refl = [c for c in classes if c.element_order == 2]
    assert len(refl) == 1 and refl[0].size == 5
    d6 = dihedral(6)
    two_classes = [c for c in d6.conjugacy_classes() if c.element_order == 2]
    # even dihedral groups split the reflections (plus the central rotation)
    assert len(two_classes) == 3


def test_vector_semidirect_closure():
    g = VectorSemidirectGroup(2, 5, ((0, -1), (1, -1)))
    assert g.order == 75
    v, a = g.gens[-1]
    assert a == 1 and v == (0, 0)
    # complement has order 3, lattice vectors order 5
    assert g.element_order(g.gens[-1]) == 3
    assert g.element_order(g.gens[0]) == 5


def test_make_group_vector_descriptor():
    g = make_group("V(2,5):M=[[0,-1],[1,-1]]")
    assert g.order == 75


def test_make_group_explicit_gens():
    g = make_group("gens:[(1,2,3),(2,3,4)]")
    assert g.order == 12  # generates A4


def test_make_group_rejects_garbage():
    with pytest.raises(ValidationError):
        make_group("Q8")


def test_normalizer_in_sym(a4, a4_cv):
    # swapping the two 3-cycle classes preserves the multiset {3a,3a,3b,3b},
    # so all of S4 survives; the single-class vector pins the classes down
    assert normalizer_in_sym(a4, a4_cv).order == 24
    single = parse_class_vector(a4, "[3a,3a,3a,3a]")
    assert normalizer_in_sym(a4, single).order == 12
    assert normalizer_in_sym(a4).order == 24


def test_symmetric_and_alternating_consistency():
    s4 = symmetric(4)
    a4 = alternating(4)
    assert set(a4.elements) <= set(s4.elements)
    assert s4.order == 2 * a4.order
