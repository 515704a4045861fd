import pytest

from picard import matring
from picard.matring import (NormalizerReport, gl_elements, gl_order, identity, lift_odd_subgroup,
                            mat_inv, mat_mul, mat_order, mat_pow, normalizer, reduce,
                            singer_subgroup, subgroup_conjugacy_count)


def _is_power_of_two(x):
    return x & (x - 1) == 0


def test_gl_orders_by_count_and_formula():
    assert gl_order(2, 1) == 6
    assert gl_order(3, 1) == 168
    assert len(gl_elements(2, 2)) == gl_order(2, 2) == 96
    assert gl_order(3, 2) == 168 * 2 ** 9


def test_gl3_mod4_direct_count():
    assert len(gl_elements(3, 2)) == 168 * 2 ** 9


def test_c3_is_the_permutation_of_a_b_ab_inverse():
    s = lift_odd_subgroup(2, 1, "C3")
    assert s.order == 3
    for n in (1, 2, 3):
        g = lift_odd_subgroup(2, n, "C3")
        assert reduce((0, -1, 1, -1), 2 ** n) in g.elements
        assert g.order == 3


def test_c7_lifts():
    s1 = lift_odd_subgroup(3, 1, "C7")
    assert s1.order == 7
    s2 = lift_odd_subgroup(3, 2, "C7")
    assert s2.order == 7
    gen = s2.generators[0]
    assert mat_order(gen, 3, 4) == 7
    assert reduce(gen, 2) == matring.companion(matring.PRIMITIVE_POLYS[3], 2)
    f = matring.lifted_cubic(2)
    assert [c % 2 for c in f] == [1, 1, 0, 1]


def test_c7_c3_has_order_21():
    for n in (1, 2):
        assert lift_odd_subgroup(3, n, "C7:C3").order == 21
    with pytest.raises(ValueError):
        lift_odd_subgroup(2, 1, "C7")


def test_normalizer_examples():
    assert normalizer(lift_odd_subgroup(3, 1, "C7:C3")).order == 21
    n7 = normalizer(lift_odd_subgroup(3, 1, "C7"))
    assert n7.order == 21
    n3 = normalizer(lift_odd_subgroup(2, 1, "C3"))
    assert NormalizerReport(lift_odd_subgroup(2, 1, "C3"), n3).quotient_order == 2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_out_gn_is_a_two_group(n):
    s = lift_odd_subgroup(2, n, "C3")
    q = NormalizerReport(s, normalizer(s)).quotient_order
    assert _is_power_of_two(q)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_c7_normalizer_quotient_is_three_times_power_of_two(n):
    s = lift_odd_subgroup(3, n, "C7")
    method = "layered" if n == 3 else "auto"
    q = NormalizerReport(s, normalizer(s, method)).quotient_order
    assert q % 3 == 0 and q % 9 and _is_power_of_two(q // 3)


def test_layered_and_exhaustive_agree():
    for k, n, t in ((2, 2, "C3"), (2, 3, "C3"), (3, 2, "C7:C3")):
        s = lift_odd_subgroup(k, n, t)
        assert normalizer(s, "layered").elements == normalizer(s, "exhaustive").elements


def test_reduction_maps_normalizer_into_normalizer():
    s = lift_odd_subgroup(2, 3, "C3")
    n_top = normalizer(s)
    n_bottom = set(normalizer(s.reduce_to(1)).elements)
    assert all(reduce(x, 2) in n_bottom for x in n_top.elements)


def test_congruence_kernel_and_s3_quotient_account_for_gl2():
    for n in (2, 3):
        mod = 2 ** n
        kernel = [g for g in gl_elements(2, n) if reduce(g, 2) == identity(2)]
        assert len(kernel) == 2 ** (4 * (n - 1))
        assert len(kernel) * 6 == gl_order(2, n)


def test_subgroup_conjugacy_counts():
    assert subgroup_conjugacy_count("C7:C3", 3, 1)[1] == 1
    assert subgroup_conjugacy_count("C7", 3, 1) == (8, 1)
    assert subgroup_conjugacy_count("C3", 2, 1) == (1, 1)


def test_singer_subgroups_are_transitive():
    for k in (2, 3, 4):
        s = singer_subgroup(k)
        assert s.order == 2 ** k - 1
        v = tuple([1] + [0] * (k - 1))
        orbit = {matring.mat_vec(g, v, k, 2) for g in s.elements}
        assert len(orbit) == 2 ** k - 1


def test_inverse_and_power():
    a = (1, 2, 3, 5)
    ai = mat_inv(a, 2, 8)
    assert mat_mul(a, ai, 2, 8) == identity(2)
    assert mat_pow(a, 0, 2, 8) == identity(2)
    with pytest.raises(ValueError):
        mat_inv((2, 0, 0, 1), 2, 8)
