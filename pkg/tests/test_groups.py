import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from picard import groups, matring
from picard.groups import (GroupBoundError, SignedPermGroup, abelian_group, automorphism_group,
                           build_group, closure, compose_signed, cyclic_group, decode_signed,
                           dihedral_8, direct_product, holomorph, identity_signed,
                           invert_signed, iso_fingerprint, iso_test, parse_family,
                           signed_perm, symmetric_group, wreath_s2)


@pytest.mark.parametrize("text, canonical", [
    ("G(1)", "G(1)"), ("A4", "G(1)"), ("P(2,2)", "P(2,2)"), ("P(1)xG(2)", "P(1)xG(2)"),
    ("G(1)xA5", "G(1)xA5"), ("E8:C7", "E8:C7"), ("E64:F21", "E64:F21"), ("B(3)", "B(3)"),
    ("AutSL28-B0", "AutSL28-B0"),
])
def test_family_strings_round_trip(text, canonical):
    tag = parse_family(text)
    assert tag.canonical() == canonical
    assert parse_family(tag.canonical()) == tag


def test_bad_family_string():
    with pytest.raises(ValueError):
        parse_family("Q(8)")


@pytest.mark.parametrize("family, order, nclasses", [
    ("G(1)", 12, 4), ("G(2)", 48, 8), ("E8:C7", 56, 8), ("E8:F21", 168, 8), ("B(2)", 12, 4),
    ("B(3)", 56, 8), ("A5", 60, 5), ("P(1)xG(1)", 24, 8), ("G(1)xA5", 720, 20), ("P(1,1)", 4, 4),
])
def test_orders_and_class_counts(family, order, nclasses):
    g = build_group(family)
    assert g.order == order
    cj = g.conjugacy
    assert len(cj.classes) == nclasses
    assert sum(c.size for c in cj.classes) == order
    for c in cj.classes:
        assert c.size * c.centralizer_order == order
        assert c.regular == (c.order % 2 == 1)


def test_a4_class_shapes():
    g = build_group("G(1)")
    orders = [c.order for c in g.conjugacy.classes]
    sizes = [c.size for c in g.conjugacy.classes]
    assert orders == [1, 2, 3, 3]
    assert sizes == [1, 3, 4, 4]


def test_group_axioms():
    for fam in ("G(2)", "E8:F21", "A5", "P(1)xG(1)"):
        build_group(fam).check_axioms()


def test_automorphism_examples():
    assert automorphism_group(build_group("G(1)")).order == 24
    assert automorphism_group(build_group("G(1)")).out_order == 2
    assert automorphism_group(build_group("E8:C7")).out_order == 3
    assert automorphism_group(abelian_group((1, 1))).order == 6
    assert automorphism_group(build_group("A5")).out_order == 2


def test_automorphisms_form_a_group():
    data = automorphism_group(build_group("G(1)"))
    auts = set(data.automorphisms)
    for a in data.automorphisms:
        inv = tuple(sorted(range(len(a)), key=lambda i: a[i]))
        assert inv in auts
        for b in data.automorphisms[:5]:
            assert tuple(a[i] for i in b) in auts


@pytest.mark.parametrize("family, k, n, target", [
    ("G(1)", 2, 1, "C3"), ("E8:C7", 3, 1, "C7"), ("E8:F21", 3, 1, "C7:C3"),
])
def test_out_of_group_equals_normalizer_quotient(family, k, n, target):
    s = matring.lift_odd_subgroup(k, n, target)
    quotient = matring.normalizer(s).order // s.order
    assert automorphism_group(build_group(family)).out_order == quotient


def test_automorphism_bound():
    with pytest.raises(GroupBoundError):
        automorphism_group(build_group("G(1)xA5"))


def test_closure_examples():
    assert closure([(-1,)]).order == 2
    assert closure([], 3).order == 1
    s4c2 = closure([(2, 1, 3, 4), (2, 3, 4, 1), (-1, -2, -3, -4)])
    assert s4c2.order == 48
    assert s4c2.is_closed()
    assert iso_test(s4c2, direct_product(symmetric_group(4), cyclic_group(2)))


def test_iso_examples():
    assert not iso_test(cyclic_group(4), abelian_group((1, 1)))
    assert iso_test(dihedral_8(), wreath_s2(cyclic_group(2)))
    assert iso_test(symmetric_group(4), holomorph(abelian_group((1, 1))))
    assert not iso_test(build_group("G(1)"), symmetric_group(4))
    assert iso_test(holomorph(cyclic_group(3)), symmetric_group(3))


def test_fingerprint_fields():
    fp = iso_fingerprint(symmetric_group(4))
    assert fp[0] == 24
    assert fp[2] == (2,)
    assert fp[3] == (12, 4, 1, 1)
    assert fp[4] == 1


def test_signed_perm_encoding():
    x = signed_perm([1, 0, 2], [1, -1, 1])
    assert x == (2, -1, 3)
    assert decode_signed(x) == ((1, 0, 2), (1, -1, 1))
    with pytest.raises(ValueError):
        signed_perm([0, 0])
    with pytest.raises(ValueError):
        signed_perm([0], [2])


def test_signed_group_json():
    g = closure([(-2, -1)], labels=["swap"])
    data = g.to_json()
    assert data["order"] == 2
    assert data["generators"][0]["label"] == "swap"
    assert isinstance(g, SignedPermGroup)


@st.composite
def signed_perms(draw, n):
    perm = draw(st.permutations(range(n)))
    signs = draw(st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n))
    return signed_perm(perm, signs)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_signed_composition_properties(data):
    n = data.draw(st.integers(1, 7))
    p, q, r = (data.draw(signed_perms(n)) for _ in range(3))
    assert compose_signed(compose_signed(p, q), r) == compose_signed(p, compose_signed(q, r))
    assert compose_signed(p, invert_signed(p)) == identity_signed(n)
    # signs multiply along the permutation
    pq = compose_signed(p, q)
    for i in range(n):
        j = abs(q[i]) - 1
        assert (pq[i] > 0) == ((q[i] > 0) == (p[j] > 0))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_closure_is_a_group(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    gens = []
    for _ in range(rng.randint(1, 2)):
        perm = list(range(n))
        rng.shuffle(perm)
        gens.append(signed_perm(perm, [rng.choice((1, -1)) for _ in range(n)]))
    g = closure(gens)
    elems = set(g.elements)
    assert identity_signed(n) in elems
    assert all(invert_signed(x) in elems for x in elems)
    assert all(compose_signed(x, y) in elems for x in elems for y in gens)
    assert (2 ** n * len(groups.symmetric_group(n).elements)) % g.order == 0
