import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import corpus
from tatehoch.barres import bar_window
from tatehoch.bimod import regular
from tatehoch.complex import (LinearComplex, homology_at, homology_data, hom_complex, lift_chain_map,
                              shift, tensor_over_Ae, truncate_geq, truncate_lt)
from tatehoch.errors import MathError, WindowError
from tatehoch.exactla import Field, kernel, rank


def test_linear_complex_by_hand():
    F = Field.rationals()
    # 0 -> Q --(1,1)--> Q^2 --(1,-1)--> Q -> 0 is exact
    d0 = F.array([[1], [1]])
    d1 = F.array([[1, -1]])
    c = LinearComplex(F, {0: 1, 1: 2, 2: 1}, {0: d0, 1: d1})
    assert [c.group(n).dim for n in range(3)] == [0, 0, 0]
    c = LinearComplex(F, {0: 1, 1: 2, 2: 1}, {0: F.zeros(2, 1), 1: F.zeros(1, 2)})
    assert [c.group(n).dim for n in range(3)] == [1, 2, 1]
    with pytest.raises(WindowError):
        c.group(5)


@given(st.sampled_from([2, 5, 17]), st.integers(1, 5), st.integers(1, 5), st.data())
def test_homology_dimension_formula(p, n, m, data):
    F = Field.prime(p)
    d_out = F.array(data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n),
                                       min_size=m, max_size=m)))
    z = kernel(F, d_out)
    k = data.draw(st.integers(0, z.dim))
    d_in = z.basis[:k].T if k else F.zeros(n, 0)
    h = homology_data(F, d_out, d_in, n)
    assert h.dim == z.dim - (rank(F, d_in) if k else 0)
    # representatives have unit coordinates
    for i, r in enumerate(h.representatives):
        assert np.array_equal(h.coords(r), F.eye(h.dim)[i])


def test_coords_rejects_non_cycles():
    F = Field.prime(3)
    h = homology_data(F, F.array([[1, 0]]), None, 2)
    with pytest.raises(MathError):
        h.coords(F.array([1, 0]))


def test_bar_window_is_exact():
    a = corpus("trunc_f11").algebra
    b = bar_window(a, 4)
    b.check()
    assert [homology_at(b, n).dim for n in (1, 2, 3)] == [0, 0, 0]
    with pytest.raises(WindowError):
        b.component(9)


def test_shift_and_truncation():
    a = corpus("dual_f5").algebra
    b = bar_window(a, 4)
    s = shift(b, 1)
    s.check()
    assert (s.lo, s.hi) == (b.lo + 1, b.hi + 1)
    assert np.array_equal(s.d(2), a.field.reduce(-b.d(1)))
    assert truncate_geq(b, 2).lo == 2
    assert truncate_lt(b, 2).hi == 1


def test_identity_lifts_to_a_chain_map():
    a = corpus("dual_f5").algebra
    b = bar_window(a, 4)
    n = a.dim
    unit = a.field.zeros(1, n * n)      # generator 1 (x) 1 goes to itself
    unit[0, 0] = 1
    phi = lift_chain_map({0: unit}, b, b, 4)
    phi.check()


def test_hom_and_tensor_complexes_have_the_right_sizes():
    a = corpus("dual_f5").algebra
    b = bar_window(a, 3)
    A = regular(a)
    h = hom_complex(b, A, degrees=range(0, 3))
    t = tensor_over_Ae(b, A, degrees=range(0, 3))
    for n in range(3):
        assert h.dims[n] == b.rank(n) * a.dim == t.dims[n]
