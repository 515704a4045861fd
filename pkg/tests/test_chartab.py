from fractions import Fraction

import numpy as np
import pytest

from picard import chartab, groups
from picard.chartab import block_data, character_table, irr_abelian, irr_fixed_by, pairing_invariant
from picard.cyclo import CycNum, embed_root

TABLE_FAMILIES = ["P(1)", "P(2)", "P(1,1)", "G(1)", "G(2)", "E8:C7", "E8:F21", "B(2)", "B(3)",
                  "B(4)", "A5", "P(1)xG(1)", "G(1)xA5", "G(1)xG(2)"]


@pytest.mark.parametrize("family", TABLE_FAMILIES)
def test_orthogonality_and_degrees(family):
    t = character_table(family)
    assert t.orthogonality_defects() == []
    assert sum(d * d for d in t.degrees) == t.order
    assert len(t) == len(t.classes)


def test_exact_inner_products_small():
    t = character_table("E8:F21")
    for i in range(len(t)):
        for j in range(len(t)):
            assert t.inner(i, j) == (1 if i == j else 0)


def test_irr_abelian_examples():
    c2 = irr_abelian(groups.abelian_group((1,)))
    assert [[v == 1 for v in row] for row in c2.irr] == [[True, True], [True, False]]
    c4 = irr_abelian(groups.abelian_group((2,)))
    units = {embed_root(4, 4, k) for k in range(4)}
    assert all(v in units for row in c4.irr for v in row)
    v4 = irr_abelian(groups.abelian_group((1, 1)))
    assert all(v.is_rational() for row in v4.irr for v in row)
    with pytest.raises(ValueError):
        irr_abelian(groups.build_group("G(1)"))


def test_a4_table_matches_printed_convention():
    t = character_table("G(1)")
    w = embed_root(t.conductor, 3, 1)
    assert t.degrees == [1, 1, 1, 3]
    assert list(t.irr[1]) == [1, 1, w, w * w]
    assert list(t.irr[2]) == [1, 1, w * w, w]
    assert list(t.irr[3]) == [3, -1, 0, 0]
    assert "omega" in t.conventions


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gn_character_count(n):
    t = character_table(f"G({n})")
    assert len(t) == 3 + (2 ** (2 * n) - 1) // 3
    assert sorted(t.degrees) == [1, 1, 1] + [3] * ((2 ** (2 * n) - 1) // 3)


def test_semidirect_degrees():
    assert sorted(character_table("E8:C7").degrees) == [1] * 7 + [7]
    assert sorted(character_table("E8:F21").degrees) == [1, 1, 1, 3, 3, 7, 7, 7]
    assert sorted(character_table("E64:C7").degrees) == [1] * 7 + [7] * 9


def test_a5_table_and_block():
    t = character_table("A5")
    assert t.degrees == [1, 3, 3, 4, 5]
    b = block_data("A5")
    assert b.decomposition == ((1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1))
    assert b.degrees == [1, 3, 3, 5]
    assert 3 not in b.irr_indices


def test_sl28_block():
    b = block_data("AutSL28-B0")
    assert b.table is None
    assert b.degrees == [1, 1, 1, 7, 7, 7, 21, 27]
    assert len(b.decomposition) == 8 and b.n_ibr == 5
    assert b.decomposition[-1] == (1, 1, 1, 2, 1)
    # degrees of Irr agree with D times the Brauer degrees
    assert list(b.dmat @ np.array(b.ibr_degrees)) == b.degrees


def test_product_projectives():
    b = block_data("P(1)xG(1)")
    assert len(b) == 8
    assert b.n_ibr == 3
    assert np.array_equal(b.cartan, np.array([[4, 2, 2], [2, 4, 2], [2, 2, 4]]))
    # chi_{P_i} = (sum over theta) (x) (chi_i + chi_4)
    assert b.projectives[0] == (1, 0, 0, 1, 1, 0, 0, 1)


@pytest.mark.parametrize("family", ["G(1)", "G(2)", "E8:C7", "E8:F21", "B(3)", "A5", "P(1)xG(1)",
                                    "G(1)xA5", "P(2)xA5", "AutSL28-B0"])
def test_block_checks(family):
    b = block_data(family)
    assert b.check() == []
    assert np.all(np.linalg.eigvalsh(b.cartan.astype(float)) > 0)


def test_projectives_vanish_on_two_singular_classes():
    for family in ("G(2)", "A5", "G(1)xA5"):
        b = block_data(family)
        t = b.table
        for col in b.projectives:
            for c, cls in enumerate(t.classes):
                if cls.regular:
                    continue
                total = CycNum.from_int(0, t.conductor)
                for coeff, i in zip(col, b.irr_indices):
                    total = total + t.irr[i][c] * coeff
                assert total.is_zero()


def test_semidirect_decomposition_shape():
    b = block_data("G(2)")
    rows = sorted(b.decomposition)
    assert rows.count((1, 1, 1)) == 5
    assert sorted(r for r in rows if sum(r) == 1) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_irr_fixed_by_examples():
    g = groups.build_group("G(1)")
    t = character_table("G(1)")
    assert irr_fixed_by(g.normal_subgroup, t) == [0, 1, 2]
    assert irr_fixed_by([g.identity], t) == [0, 1, 2, 3]
    e = groups.build_group("E8:C7")
    lin = irr_fixed_by(e.normal_subgroup, character_table("E8:C7"))
    assert len(lin) == 7
    with pytest.raises(ValueError):
        irr_fixed_by([g.elements[g.index[((0, 0), 1)]]], t)


def test_pairing_invariants():
    a5 = block_data("A5")
    assert a5.column_sums == (4, 2, 2)
    assert pairing_invariant(0, a5) == 4
    for n in (1, 2):
        b = block_data(f"G({n})xA5")
        n_a5 = 4
        g_table = character_table(f"G({n})")
        for pos, label in enumerate(b.labels):
            gi, aj = divmod(pos, n_a5)
            if aj == 3 and g_table.degrees[gi] == 1:
                assert pairing_invariant(pos, b) == Fraction(8 * (2 ** (2 * n) + 2), 3)
            if aj == 0 and g_table.degrees[gi] == 3:
                assert pairing_invariant(pos, b) == 4 * (2 ** (2 * n) + 2)


def test_table_json_shape():
    data = character_table("G(1)").to_json()
    assert data["order"] == 12
    assert [c["regular"] for c in data["classes"]] == [True, False, True, True]
    assert data["characters"][3]["degree"] == 3
    assert CycNum.from_json(data["characters"][1]["values"][2]) == embed_root(6, 3, 1)
    assert set(block_data("A5").to_json()) >= {"irr", "ibr", "decomposition", "table"}


def test_unsupported_products():
    with pytest.raises(ValueError):
        block_data("AutSL28-B0xG(1)")
