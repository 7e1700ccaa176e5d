"""Generators, the generating polynomial P, and the first-principles oracle."""

from fractions import Fraction

import pytest

from weylfrob.exactalg import Poly
from weylfrob.orbitspace import (assemble_P, compute_g_direct, elementary_symmetric,
                                 exp_granularity, generator_map, theta_chart,
                                 theta_map, y_chart, zeta_chart)
from weylfrob.rootdata import RootSystemSpec, degrees


def test_elementary_symmetric_rank3():
    c = zeta_chart(RootSystemSpec("C", 3, 1))
    zs = [c.var(f"zeta{j}") for j in (1, 2, 3)]
    a, b, d = zs
    assert elementary_symmetric(zs, 2) == a * b + a * d + b * d
    assert elementary_symmetric(zs, 0) == Poly.const(c, 1)


def test_generators_rank2():
    spec = RootSystemSpec("C", 2, 1)
    gen = generator_map(spec)
    zc = gen.source
    E = zc.var("E")
    z1, z2 = zc.var("zeta1"), zc.var("zeta2")
    assert gen.forward["y1"] == E * (z1 + z2)
    assert gen.forward["y2"] == E * (z1 * z2)


def test_generators_c3k1_match_worked_example():
    spec = RootSystemSpec("C", 3, 1)
    gen = generator_map(spec)
    zc = gen.source
    E = zc.var("E")
    zs = [zc.var(f"zeta{j}") for j in (1, 2, 3)]
    assert gen.forward["y1"] == E * (zs[0] + zs[1] + zs[2])
    assert gen.forward["y2"] == E * elementary_symmetric(zs, 2)
    assert gen.forward["y3"] == E * (zs[0] * zs[1] * zs[2])
    # every generator is weighted homogeneous of degree d_j
    d = degrees(spec)
    for j in (1, 2, 3):
        assert gen.forward[f"y{j}"].weighted_degree() == d[j - 1]


@pytest.mark.parametrize("l,k", [(1, 1), (2, 1), (2, 2), (3, 2), (4, 2)])
def test_assemble_P_expansion_identity(l, k):
    # construction itself verifies P(u) = E^k prod(u + zeta_j)
    gp = assemble_P(RootSystemSpec("C", l, k))
    assert len(gp.thetas) == l + 1


def test_theta_chart_weights_all_equal_k():
    spec = RootSystemSpec("C", 3, 2)
    tc = theta_chart(spec)
    assert all(v.weight == 2 for v in tc.vars)
    tmap = theta_map(spec)
    yc = tmap.target
    E = yc.var("E")
    assert tmap.pullback["th0"] == E ** 2
    assert tmap.pullback["th1"] == yc.var("y1") * E
    assert tmap.pullback["th2"] == yc.var("y2")
    assert tmap.pullback["th3"] == yc.var("y3")


def test_direct_metric_rank1():
    spec = RootSystemSpec("C", 1, 1)
    g = compute_g_direct(spec)
    yc = g.chart
    assert g.mat[0][0] == 4 * Poly.monomial(yc, {"y1": 1, "E": 1})
    assert g.mat[0][1] == yc.var("y1")
    assert g.mat[1][1] == Poly.const(yc, 1)


@pytest.mark.parametrize("family,l,k", [("C", 2, 1), ("C", 2, 2), ("C", 3, 2),
                                        ("B", 2, 2), ("B", 3, 1)])
def test_direct_metric_structure(family, l, k):
    spec = RootSystemSpec(family, l, k)
    g = compute_g_direct(spec)
    d = list(degrees(spec)) + [Fraction(0)]
    dk = d[k - 1]
    assert g.is_symmetric()
    # corner and last column from the definition
    assert g.mat[l][l] == Poly.const(g.chart, 1 / dk)
    for m in range(1, l + 1):
        assert g.mat[m - 1][l] == (d[m - 1] / dk) * g.chart.var(f"y{m}")
    # weighted homogeneity deg g^{ij} = d_i + d_j
    for i in range(l + 1):
        for j in range(l + 1):
            if not g.mat[i][j].is_zero():
                assert g.mat[i][j].weighted_degree() == d[i] + d[j]


def test_exp_granularity_quarter_step_for_b_half_twist():
    assert exp_granularity(RootSystemSpec("B", 3, 3)) == Fraction(1, 4)
    assert exp_granularity(RootSystemSpec("B", 3, 2)) == 1
    assert exp_granularity(RootSystemSpec("C", 3, 3)) == 1
    assert y_chart(RootSystemSpec("B", 2, 2)).weight("E") == Fraction(1, 4)


def test_oracle_bound_enforced():
    with pytest.raises(ValueError):
        compute_g_direct(RootSystemSpec("C", 5, 1), max_rank=4)


def test_theta_machinery_is_c_only():
    with pytest.raises(ValueError):
        generator_map(RootSystemSpec("B", 2, 1))
    with pytest.raises(ValueError):
        assemble_P(RootSystemSpec("B", 2, 1))
