import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from picard import chartab, groups, isometry
from picard.isometry import (CFLattice, EnumerationBoundError, EnumerationStats, SignedBijection,
                             factor_tensor, howell_form, is_perfect, morita_constraints,
                             perf_enumerate, perf_exhaustive)


@pytest.fixture(scope="module")
def a4():
    return chartab.block_data("G(1)")


@pytest.fixture(scope="module")
def perf_a4(a4):
    return perf_enumerate(a4)


def _s4xc2():
    return groups.direct_product(groups.symmetric_group(4), groups.cyclic_group(2))


def test_identity_is_perfect(a4):
    assert is_perfect(SignedBijection.identity(a4)).ok


def test_swap_with_negation_is_perfect(a4):
    iso = SignedBijection(a4, a4, (3, 1, 2, 0), (-1, 1, 1, -1))
    assert is_perfect(iso).ok
    assert is_perfect(iso, exact=True).ok


def test_positive_transposition_is_not_perfect(a4):
    iso = SignedBijection(a4, a4, (3, 1, 2, 0), (1, 1, 1, 1))
    report = is_perfect(iso)
    assert not report.ok
    assert any("2-singular" in f for f in report.failures)
    assert not is_perfect(iso, exact=True).ok


def test_bijection_validation(a4):
    with pytest.raises(ValueError):
        SignedBijection(a4, a4, (0, 0, 1, 2), (1, 1, 1, 1))
    with pytest.raises(ValueError):
        SignedBijection(a4, a4, (0, 1, 2), (1, 1, 1))


def test_perf_a4(perf_a4):
    assert perf_a4.order == 48
    assert groups.iso_test(perf_a4, _s4xc2())


def test_perf_a4_pruned_equals_exhaustive(a4, perf_a4):
    exhaustive = perf_exhaustive(a4)
    assert exhaustive.elements == perf_a4.elements
    assert perf_enumerate(a4, prune=False).elements == perf_a4.elements


def test_perf_c2_exhaustive_and_pruned():
    b = chartab.block_data("P(1)")
    assert perf_exhaustive(b).order == 4
    assert perf_enumerate(b).elements == perf_exhaustive(b).elements


@pytest.mark.parametrize("family, order", [("P(1)", 4), ("P(2)", 16), ("P(1,1)", 48)])
def test_perf_abelian(family, order):
    b = chartab.block_data(family)
    grp = perf_enumerate(b)
    assert grp.order == order
    for x in grp.elements:
        signs = groups.decode_signed(x)[1]
        assert len(set(signs)) == 1


def test_perf_c2xa4_factorizes():
    b = chartab.block_data("P(1)xG(1)")
    grp = perf_enumerate(b)
    assert grp.order == 96
    perf_p = set(perf_enumerate(chartab.block_data("P(1)")).elements)
    perf_g = set(perf_enumerate(chartab.block_data("G(1)")).elements)
    for x in grp.elements:
        parts = factor_tensor(x, 2, 4)
        assert parts is not None
        j, k = parts
        assert j in perf_p and k in perf_g


@pytest.mark.slow
@pytest.mark.parametrize("family, n1, order", [("P(2)xG(1)", 4, 384), ("P(1,1)xG(1)", 4, 1152)])
def test_perf_larger_p_times_a4(family, n1, order):
    b = chartab.block_data(family)
    grp = perf_enumerate(b)
    assert grp.order == order
    for x in grp.elements:
        parts = factor_tensor(x, n1, 4)
        assert parts is not None
        signs = groups.decode_signed(parts[0])[1]
        assert len(set(signs)) == 1


def test_enumeration_bound():
    b = chartab.block_data("G(1)xG(2)")
    with pytest.raises(EnumerationBoundError):
        perf_enumerate(b)
    with pytest.raises(EnumerationBoundError):
        perf_exhaustive(chartab.block_data("P(1)xG(1)"))


def test_stats_are_recorded(a4):
    stats = EnumerationStats()
    perf_enumerate(chartab.block_data("P(2)"), stats=stats)
    assert stats.verified >= 16 and stats.nodes > 0


def test_morita_cells_examples():
    cells = morita_constraints(chartab.block_data("P(1)xG(1)"))
    sizes = sorted(len(c) for c in cells.cells)
    assert sizes == [2, 2, 2, 2]
    a5 = morita_constraints(chartab.block_data("A5"))
    assert [0] in a5.cells
    ga5 = chartab.block_data("G(1)xA5")
    cells = morita_constraints(ga5)
    top = [i for i, lab in enumerate(ga5.labels) if lab.endswith("⊗psi4") and ga5.degrees[i] == 5]
    alpha = [i for i, lab in enumerate(ga5.labels) if lab.endswith("⊗psi1") and ga5.degrees[i] == 3]
    key_top = {cells.keys[cells.cell_of(i)] for i in top}
    key_alpha = {cells.keys[cells.cell_of(i)] for i in alpha}
    assert key_top.isdisjoint(key_alpha)


def test_cells_preserved_by_perfect_isometries(perf_a4, a4):
    cells = morita_constraints(a4)
    positive = [x for x in perf_a4.elements if all(v > 0 for v in x)]
    assert all(cells.preserved_by(groups.decode_signed(x)[0]) for x in positive)


def test_cf_lattice_contains_generators(a4):
    lattice = CFLattice(a4)
    assert lattice.contains_all(np.array(lattice.generators))
    bad = np.zeros_like(lattice.generators[0])
    bad.flat[0] = 1
    assert not lattice.contains(bad)


def test_howell_form_spans_same_module():
    rows = [np.array([2, 4]), np.array([1, 3])]
    h = howell_form(rows, 2, 3)
    assert any(r[0] % 8 for r in h)
    assert all(len(r) == 2 for r in h)


def test_json_shape(perf_a4, a4):
    report = isometry.group_report(perf_a4, a4, claimed=("S4xC2", _s4xc2()))
    assert report["order"] == 48
    assert report["matched_iso_type"]["match"]
    assert SignedBijection.identity(a4).to_json() == {"perm": [0, 1, 2, 3], "signs": [1, 1, 1, 1]}


# ---------------------------------------------------------------------------
# group properties on enumerated sets
# ---------------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.data())
def test_perfect_set_is_a_group(data):
    block = chartab.block_data(data.draw(st.sampled_from(["G(1)", "P(2)"])))
    elems = perf_enumerate(block).elements
    x = data.draw(st.sampled_from(elems))
    y = data.draw(st.sampled_from(elems))
    ix = SignedBijection.from_signed(block, block, x)
    iy = SignedBijection.from_signed(block, block, y)
    assert is_perfect(ix.compose(iy)).ok
    assert is_perfect(ix.inverse()).ok
    neg = SignedBijection(block, block, ix.perm, tuple(-s for s in ix.signs))
    assert is_perfect(neg).ok


def test_non_perfect_candidates_stay_outside(a4, perf_a4):
    inside = set(perf_a4.elements)
    for perm in itertools.permutations(range(4)):
        for signs in itertools.product((1, -1), repeat=4):
            x = groups.signed_perm(perm, signs)
            assert is_perfect(SignedBijection(a4, a4, perm, signs)).ok == (x in inside)
