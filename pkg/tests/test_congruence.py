from fractions import Fraction

import numpy as np
import pytest

import oracles
from entanglement_atlas.congruence import genus, modular_invariants, sl2_level
from entanglement_atlas.gl2 import FiniteMatrixGroup, ResidueMatrix, gl2_group, preimage_in
from entanglement_atlas.lattice import borel, nonsplit_cartan_normalizer, split_cartan_normalizer


def sl2_set(G):
    return [ResidueMatrix.from_code(int(c), G.modulus).entries for c in G.sl2_part().elements]


def summary(inv):
    return inv.index, inv.cusps, inv.e2, inv.e3, sorted(c.width for c in inv.cusp_data)


# X_0(N) data from the classical formulas: index, cusps, e2, e3, genus
X0 = {
    2: (3, 2, 1, 0, 0),
    3: (4, 2, 0, 1, 0),
    5: (6, 2, 2, 0, 0),
    7: (8, 2, 0, 2, 0),
    11: (12, 2, 0, 0, 1),
    13: (14, 2, 2, 2, 0),
}


@pytest.mark.parametrize("p", sorted(X0))
def test_x0_invariants(p):
    inv = modular_invariants(borel(p))
    assert (inv.index, inv.cusps, inv.e2, inv.e3, inv.genus) == X0[p]
    assert sorted(c.width for c in inv.cusp_data) == [1, p]


@pytest.mark.parametrize("G", [borel(5), split_cartan_normalizer(5), nonsplit_cartan_normalizer(7)],
                         ids=["5B", "5Ns", "7Nn"])
def test_invariants_match_coset_oracle(G):
    ref = oracles.coset_action_invariants(sl2_set(G), G.modulus)
    assert summary(modular_invariants(G)) == ref
    assert oracles.genus_formula(*ref[:4]) == modular_invariants(G).genus


def test_full_group_has_index_one():
    inv = modular_invariants(gl2_group(6))
    assert (inv.index, inv.cusps, inv.genus, inv.sl2_level) == (1, 1, 0, 1)


def test_gs_gn_genus_one(g_s, g_n):
    for G in (g_s, g_n):
        inv = modular_invariants(G)
        assert inv.genus == 1
        ref = oracles.coset_action_invariants(sl2_set(G), 14)
        assert summary(inv) == ref


def test_level14_siegel_group_cusps(level14_siegel_group):
    inv = modular_invariants(level14_siegel_group)
    assert inv.genus == 0
    assert [c.label for c in inv.cusp_data] == ["oo", "0", "1", "5", "7", "14/3"]
    assert [c.width for c in inv.cusp_data] == [14, 2, 14, 14, 2, 2]
    assert inv.index == 48


def test_minus_identity_does_not_change_invariants(constellation):
    for G in constellation.values():
        assert not G.has_minus_identity()
        pm = G.with_minus_identity()
        a, b = modular_invariants(G).as_dict(), modular_invariants(pm).as_dict()
        # the curve only sees +-H; the SL2 level is a property of H itself
        a.pop("sl2_level"), b.pop("sl2_level")
        assert a == b


def test_conjugation_invariance(maxgroups):
    G = maxgroups[1]
    K = G.conjugate(ResidueMatrix.of(6, (1, 2, 1, 3)))
    a, b = modular_invariants(G), modular_invariants(K)
    assert summary(a) == summary(b) and a.genus == b.genus


def test_sl2_level():
    assert sl2_level(borel(5).sl2_part()) == 5
    assert sl2_level(gl2_group(10).sl2_part()) == 1
    # a level-5 group viewed at level 10 still has SL2 level 5
    lifted = preimage_in(gl2_group(10), 5, borel(5))
    assert sl2_level(lifted.sl2_part()) == 5
    assert modular_invariants(lifted).index == 6


def test_sl2_level_of_unexplained_groups_is_pq(nabg, maxgroups, g_s, g_n):
    for G in (nabg[1], nabg[2], maxgroups[1]):
        assert sl2_level(G.sl2_part()) == 6
    for G in (g_s, g_n):
        assert sl2_level(G.sl2_part()) == 14


def test_sl2_level_of_explained_product_divides_a_prime():
    # sign mod 2 tied to the det character mod 3; on SL2 this forces an even sign mod 2
    els = [m for m in oracles.all_gl2(6) if (oracles.det(m, 6) % 3 == 1) == _even(m)]
    G = FiniteMatrixGroup(6, elements=np.array(sorted(ResidueMatrix.of(6, m).code for m in els)))
    assert G.order == 144
    assert sl2_level(G.sl2_part()) == 2


def _even(m):
    a, b, c, d = (v % 2 for v in m)
    return (a, b, c, d) in ((1, 0, 0, 1), (0, 1, 1, 1), (1, 1, 1, 0))


def test_genus_shortcut(g_s):
    assert genus(g_s) == 1


def test_cusp_values():
    inv = modular_invariants(borel(5))
    assert [c.value for c in inv.cusp_data] == [None, Fraction(0)]
