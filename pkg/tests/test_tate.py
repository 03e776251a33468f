import pytest
from hypothesis import given, settings, strategies as st

from conftest import CORPUS, corpus
from oracles import dual_numbers_tate_oracle
from tatehoch.algebra import Automorphism, identity_automorphism
from tatehoch.barres import hochschild_cohomology
from tatehoch.bimod import outer_tensor_A, regular, twist
from tatehoch.errors import RadicalUnavailable, WindowError
from tatehoch.tate import (complete_bar_window, minimality_check, syzygies, tate_cohomology, tate_homology,
                           tate_via_stable, verify_dimension_shift, verify_norm_sequence, verify_syzygies,
                           verify_twist_ext, verify_weak_projective_vanishing)

# dims of Ĥ^n(A, A) for k[x]/(x^2) from its 1-periodic complete resolution (oracle)
DUAL_TATE = {5: [1] * 9, 2: [2] * 9}
# ranks of the minimal A^e-resolution, degrees 0..3 (oracles.hochschild_cohomology_minimal)
MINIMAL_RANKS = {"dual_f5": [1, 1, 1, 1], "trunc_f11": [1, 1, 1, 1]}


def both_engines(name, m_fn, lo, hi, W):
    s = corpus(name)
    a, f = s.algebra, s.frobenius
    m = m_fn(s)
    ch = syzygies(a, f, max(abs(lo), abs(hi)) + 1)
    degrees = range(lo, hi + 1)
    formula = [(tate_cohomology(a, f, m, n, W).dim, tate_homology(a, f, m, n, W).dim) for n in degrees]
    stable = [(tate_via_stable(a, f, m, n, W, ch).dim,
               tate_via_stable(a, f, m, n, W, ch, homology=True).dim) for n in degrees]
    return formula, stable


@pytest.mark.parametrize("p,name", [(5, "dual_f5"), (2, "dual_f2")])
def test_dual_numbers_against_periodic_resolution(p, name):
    assert dual_numbers_tate_oracle(p, -4, 4)[0] == dict(zip(range(-4, 5), DUAL_TATE[p]))
    formula, stable = both_engines(name, lambda s: regular(s.algebra), -4, 4, 5)
    assert [c for c, _ in formula] == DUAL_TATE[p]
    assert [c for c, _ in stable] == DUAL_TATE[p]


@pytest.mark.parametrize("name", ["field_f7", "field_q", "group_f5c2"])
def test_separable_algebras_vanish(name):
    formula, stable = both_engines(name, lambda s: regular(s.algebra), -4, 4, 5)
    assert formula == stable == [(0, 0)] * 9


@pytest.mark.parametrize("name", CORPUS)
def test_engines_agree_with_nakayama_twist(name):
    def twisted(s):
        return twist(regular(s.algebra), identity_automorphism(s.algebra), s.frobenius.nakayama)
    formula, stable = both_engines(name, twisted, -3, 3, 4)
    assert formula == stable


def test_positive_degrees_are_hochschild():
    s = corpus("trunc_f11")
    a, f = s.algebra, s.frobenius
    A = regular(a)
    for n in (1, 2, 3):
        assert tate_cohomology(a, f, A, n).dim == hochschild_cohomology(a, A, n).dim


def test_norm_sequence_dual_f2():
    s = corpus("dual_f2")
    res = verify_norm_sequence(s.algebra, s.frobenius, regular(s.algebra))
    assert res == {"dims": (2, 2, 2, 2), "norm_rank": 0}


def test_norm_sequence_corpus(spec):
    res = verify_norm_sequence(spec.algebra, spec.frobenius, regular(spec.algebra))
    d = res["dims"]
    assert d[0] == d[1] - res["norm_rank"] and d[3] == d[2] - res["norm_rank"]


def test_minimality():
    s = corpus("dual_f5")
    t = complete_bar_window(s.algebra, s.frobenius, 4)
    assert all(minimality_check(t).values())
    assert [t.rank(n) for n in range(4)] == MINIMAL_RANKS["dual_f5"]
    s = corpus("trunc_f11")
    t = complete_bar_window(s.algebra, s.frobenius, 4)
    m = minimality_check(t)
    assert not any(m[n] for n in m if n >= 1)
    assert all(t.rank(n) > r for n, r in enumerate(MINIMAL_RANKS["trunc_f11"]) if n >= 1)


def test_minimality_needs_radical():
    s = corpus("dual_f2")
    with pytest.raises(RadicalUnavailable):
        minimality_check(complete_bar_window(s.algebra, s.frobenius, 3))


def test_weakly_projective_vanishing(spec):
    A = regular(spec.algebra)
    assert verify_weak_projective_vanishing(spec.algebra, spec.frobenius, outer_tensor_A(A))["vanishes"]


@pytest.mark.parametrize("name", ["dual_f5", "trunc_f11", "qext_f17"])
def test_dimension_shift(name):
    s = corpus(name)
    rows = verify_dimension_shift(s.algebra, s.frobenius, regular(s.algebra), -2, 2)
    assert len(rows) == 5


def test_syzygy_chain(spec):
    ch = syzygies(spec.algebra, spec.frobenius, 3)
    verify_syzygies(ch)


def test_twisted_ext_qext():
    s = corpus("qext_f17")
    A = regular(s.algebra)
    assert len(verify_twist_ext(s.algebra, s.frobenius, A, A, s.frobenius.nakayama)) == 5


@settings(max_examples=8)
@given(st.integers(1, 4))
def test_engines_agree_for_random_twists(c):
    s = corpus("dual_f5")
    a, f = s.algebra, s.frobenius
    alpha = Automorphism(a, a.field.array([[1, 0], [0, c]]))
    m = twist(regular(a), identity_automorphism(a), alpha)
    ch = syzygies(a, f, 3)
    for n in range(-2, 3):
        assert tate_cohomology(a, f, m, n).dim == tate_via_stable(a, f, m, n, chain=ch).dim
        assert tate_homology(a, f, m, n).dim == tate_via_stable(a, f, m, n, chain=ch, homology=True).dim


def test_window_too_small():
    s = corpus("dual_f5")
    with pytest.raises(WindowError):
        tate_cohomology(s.algebra, s.frobenius, regular(s.algebra), 5, W=4)
