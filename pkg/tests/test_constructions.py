import numpy as np
import pytest

from boolforge import constructions as c
from boolforge.boolfn import AnfPolynomial, TruthTable, bivariate_degree, evaluate_bivariate, wt_n
from boolforge.constructions import ConstructionParams, InvalidParameters
from boolforge.gf2field import field_for
from boolforge.spectral import is_bent, nonlinearity
from oracles import support_by_definition


def test_param_validation():
    with pytest.raises(InvalidParameters):
        ConstructionParams(2, 3)
    with pytest.raises(InvalidParameters):
        ConstructionParams(3, 2)
    with pytest.raises(InvalidParameters):
        ConstructionParams(3, 3, u=7)
    with pytest.raises(InvalidParameters):
        ConstructionParams(3, 3, s=511)
    with pytest.raises(InvalidParameters):
        ConstructionParams(3, 3, l=-1)
    p = ConstructionParams(3, 3, u=8)
    assert p.u == 1 and p.n == 12 and p.q1 == 7
    assert c.valid_exponents(3) == [1, 2, 3, 4, 5, 6]
    assert c.valid_exponents(4) == [1, 2, 4, 7, 8, 11, 13, 14]


@pytest.mark.parametrize("r,m,u,s", [(1, 3, 1, 0), (1, 3, 3, 5), (3, 3, 1, 0), (3, 3, 6, 100), (1, 4, 7, 9)])
def test_support_matches_definition(r, m, u, s):
    p = ConstructionParams(r, m, u, s)
    ix = p.indexer()
    pts = support_by_definition(r, m, u, s, ix.field.modulus)
    want = {ix.index(x, y) for x, y in pts}
    got = set(c.construct_unbalanced(p).support().tolist())
    assert got == want
    assert len(got) == ((1 << m) - 1) << (r * m - 1)


def test_balanced_differs_on_axis_only():
    for u, s, l in ((1, 0, 0), (5, 7, 300)):
        p = ConstructionParams(3, 3, u, s, l)
        f, F = c.construct_unbalanced(p), c.construct_balanced(p)
        diff = np.flatnonzero(f.bits != F.bits)
        ix = p.indexer()
        want = {ix.index(int(g), 0) for g in ix.field.delta_array(l)}
        assert set(diff.tolist()) == want and len(want) == 256
        ys = ix.y_values
        assert np.array_equal(f.bits[ys != 0], F.bits[ys != 0])
        assert F.is_balanced()


def test_bentness_dichotomy_n6():
    for u in range(1, 7):
        f = c.construct_unbalanced(ConstructionParams(1, 3, u))
        assert is_bent(f) == (u in (1, 2, 4))
    f = c.construct_unbalanced(ConstructionParams(1, 3, 1))
    from boolforge.spectral import walsh_spectrum
    assert set(np.abs(walsh_spectrum(f).values).tolist()) == {8}
    assert not is_bent(c.construct_unbalanced(ConstructionParams(1, 4, 7)))


def test_degree_examples():
    assert c.construct_unbalanced(ConstructionParams(3, 3, 6)).degree() == 10
    for u in c.valid_exponents(3):
        assert c.construct_balanced(ConstructionParams(3, 3, u)).degree() == 11


def test_carlet_feng():
    f = field_for(12)
    cf = c.carlet_feng(f, 0)
    assert cf.weight() == 2048 and cf.bits[0] == 0
    assert cf.degree() == 11
    assert nonlinearity(cf) == 1970
    for l in (0, 1, 510):
        assert c.carlet_feng(field_for(9), l).weight() == 256


def test_quotient_form():
    for u, s in ((1, 0), (3, 17), (6, 400)):
        p = ConstructionParams(3, 3, u, s)
        g = c.carlet_feng(field_for(9), s)
        assert c.quotient_form(p, g) == c.construct_unbalanced(p)
        assert c.quotient_form(p, TruthTable.zeros(9)) == TruthTable.zeros(12)
    a = c.construct_unbalanced(ConstructionParams(3, 3, 3))
    b = c.construct_unbalanced(ConstructionParams(3, 3, 6))
    assert a.weight() == b.weight()
    with pytest.raises(ValueError):
        c.quotient_form(ConstructionParams(3, 3), TruthTable.zeros(8))


def test_interval_indicator_terms_univariate():
    # sum_i c_i x^i reproduces the Carlet-Feng table on GF(2^k)
    for k, shift in ((5, 0), (5, 9), (9, 100)):
        f = field_for(k)
        terms = c.interval_indicator_terms(f, shift)
        x = np.arange(f.size)
        acc = np.zeros(f.size, np.int64)
        for i, coeff in terms:
            acc ^= f.mul_array(f.pow_array(x, i), np.full(f.size, coeff))
        assert np.array_equal(acc, c.carlet_feng(f, shift).bits)


# s, l are exponents of alpha, so {0, 7} is read modulo 2^rm - 1 (7 = 0 when rm = 3)
SWEEP_EXHAUSTIVE = [(r, m, u, s % ((1 << r * m) - 1), l % ((1 << r * m) - 1))
                    for r, m in ((1, 3), (1, 4), (3, 3))
                    for u in c.valid_exponents(m) for s in (0, 7) for l in (0, 7)]


@pytest.mark.parametrize("r,m,u,s,l", SWEEP_EXHAUSTIVE)
def test_closed_form_exhaustive(r, m, u, s, l):
    p = ConstructionParams(r, m, u, s, l)
    ix = p.indexer()
    f, F = c.construct_unbalanced(p), c.construct_balanced(p)
    tf, tF = c.closed_form_terms(p), c.closed_form_terms(p, balanced=True)
    assert evaluate_bivariate(tf, ix) == f
    assert evaluate_bivariate(tF, ix) == F
    df, dF = f.degree(), F.degree()
    assert bivariate_degree(tf) == df
    assert bivariate_degree(tF) == dF == p.n - 1
    n = p.n
    assert n - m <= df <= n - 2
    if wt_n(m, u) == 1:
        assert df == n - m
    if wt_n(m, -u) == 1:
        assert df == n - 2


def test_annihilator_witness_of_f():
    for u in c.valid_exponents(3):
        p = ConstructionParams(3, 3, u)
        ix = p.indexer()
        ind = TruthTable(12, (ix.y_values == 0).astype(np.uint8))
        assert ind.degree() == 3
        assert (ind & c.construct_unbalanced(p)).weight() == 0


def test_linear_in_y_times_F(rng):
    # L(y) F = L(y) f, so deg(L F) <= deg f + 1
    p = ConstructionParams(3, 3, 1)
    f, F = c.construct_unbalanced(p), c.construct_balanced(p)
    for mask in range(1, 8):
        L = AnfPolynomial.from_monomials(12, [1 << j for j in range(3) if mask >> j & 1]).evaluate()
        assert (L & F) == (L & f)
        assert (L & F).degree() <= f.degree() + 1


@pytest.mark.parametrize("r,m", [(1, 4), (3, 3)])
def test_cyclotomic_coset_invariants(r, m):
    # u and 2u lie in one cyclotomic coset; compare what a linear equivalence would preserve
    from boolforge.spectral import walsh_spectrum
    q1 = (1 << m) - 1
    for u in c.valid_exponents(m):
        a = c.construct_balanced(ConstructionParams(r, m, u))
        b = c.construct_balanced(ConstructionParams(r, m, (2 * u) % q1))
        assert a.weight() == b.weight() and a.degree() == b.degree()
        sa = np.sort(np.abs(walsh_spectrum(a).values))
        sb = np.sort(np.abs(walsh_spectrum(b).values))
        assert np.array_equal(sa, sb)
        fa = c.construct_unbalanced(ConstructionParams(r, m, u))
        fb = c.construct_unbalanced(ConstructionParams(r, m, (2 * u) % q1))
        assert fa.degree() == fb.degree()
