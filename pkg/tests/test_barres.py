import pytest

from conftest import corpus, int_table
from oracles import hochschild_cohomology_minimal
from tatehoch.barres import (CohClass, bar_window, cup_bar_AA, hochschild_cohomology, hochschild_homology,
                             verify_bar, verify_bar_diagonal, verify_composition_product)
from tatehoch.bimod import regular
from tatehoch.errors import WindowError

# dim H^n(A, A), n = 0.., from oracles.hochschild_cohomology_minimal
HH = {
    "dual_f5": [2, 1, 1, 1, 1],
    "dual_f2": [2, 2, 2, 2, 2],
    "field_f7": [1, 0, 0, 0, 0],
    "trunc_f11": [3, 2, 2, 2],
}


@pytest.mark.parametrize("name", sorted(HH))
def test_hochschild_cohomology_frozen(name):
    a = corpus(name).algebra
    A = regular(a)
    top = len(HH[name]) - 1
    bar = bar_window(a, top + 1)
    assert [hochschild_cohomology(a, A, n, bar).dim for n in range(top + 1)] == HH[name]


def test_hochschild_oracle_live():
    s = corpus("dual_f5")
    dims, ranks = hochschild_cohomology_minimal(int_table(s), 5, 4)
    assert dims == HH["dual_f5"]
    assert ranks == [1] * 6


@pytest.mark.parametrize("name", sorted(HH))
def test_symmetric_algebras_have_matching_homology(name):
    # A symmetric: H_n(A, A) is dual to H^n(A, A)
    a = corpus(name).algebra
    A = regular(a)
    top = min(len(HH[name]) - 1, 3)
    bar = bar_window(a, top + 1)
    assert [hochschild_homology(a, A, n, bar).dim for n in range(top + 1)] == HH[name][:top + 1]


def test_bar_identities(spec):
    b = bar_window(spec.algebra, 3)
    assert verify_bar(b)
    verify_bar_diagonal(b)


@pytest.mark.parametrize("name", ["dual_f5", "dual_f2", "trunc_f11", "qext_f17"])
def test_cup_is_composition_product(name):
    report = verify_composition_product(corpus(name).algebra, 1)
    assert report and all(ok for _, ok in report)


def test_degree_one_square_vanishes_in_odd_characteristic():
    # u cup u = -(u cup u) for |u| = 1, so 2 (u cup u) = 0 and p = 5 forces zero
    a = corpus("dual_f5").algebra
    A = regular(a)
    bar = bar_window(a, 3)
    H1, H2 = hochschild_cohomology(a, A, 1, bar), hochschild_cohomology(a, A, 2, bar)
    for x in H1.representatives:
        u = CohClass(1, x, A)
        prod = cup_bar_AA(a, u, u)
        assert H2.boundaries.contains(prod.rep.reshape(1, -1))


def test_negative_degree_rejected():
    a = corpus("dual_f5").algebra
    with pytest.raises(WindowError):
        hochschild_cohomology(a, regular(a), -1)
