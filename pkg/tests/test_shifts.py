import math

import numpy as np
import pytest

from mobshift.errors import ParameterError, PoleError, WindowMismatchError
from mobshift.numkernel import BILATERAL, ORTHONORMAL, UNILATERAL, OperatorMatrix, TruncationWindow
from mobshift.repn import ANTIHOLO, COMPLEMENTARY, HOLO, PRINCIPAL, RepnParams, SeriesTag, gram
from mobshift.shifts import (
    ReducibleShiftSpec,
    WeightedShiftSpec,
    canonical_shift,
    gram_adjoint,
    reducible_shift,
    shift_matrix,
    to_orthonormal,
    weight_sequence,
)

HOLO2 = RepnParams(UNILATERAL, 2.0)
PRIN = RepnParams(BILATERAL, 0.3, complex(0.35, 0.7))
COMP = RepnParams(BILATERAL, 0.4, 0.2 + 0j)


# ---------------------------------------------------------------- specs


def test_shift_matrix_places_entries():
    w = TruncationWindow(BILATERAL, 3, 0)
    m = shift_matrix(w, -1, {0: 2.0})
    assert m.entry(1, 0) == 2.0
    assert np.count_nonzero(m.data) == 1


def test_shift_matrix_rejects_out_of_window_targets():
    w = TruncationWindow(UNILATERAL, 3, 0)
    with pytest.raises(ParameterError):
        shift_matrix(w, +1, {0: 1.0})  # would target n = -1


def test_weighted_shift_spec_roundtrip():
    w = TruncationWindow(UNILATERAL, 5, 1)
    spec = WeightedShiftSpec.from_function(w, -1, lambda n: 1.0 / (n + 2))
    assert set(spec.coefficients) == set(range(0, 5))
    m = spec.matrix()
    assert m.entry(3, 2) == pytest.approx(0.25)
    with pytest.raises(ParameterError):
        WeightedShiftSpec(w, -1, {5: 1.0})  # target n = 6 leaves the window


# ---------------------------------------------------------------- canonical shifts


def test_t1star_kills_bottom_vector():
    w = TruncationWindow(UNILATERAL, 6, 1)
    t = canonical_shift("T1star", HOLO2, w)
    assert np.max(np.abs(t.data[:, 0])) == 0.0


def test_t1star_first_coefficient():
    w = TruncationWindow(UNILATERAL, 6, 1)
    t = canonical_shift("T1star", HOLO2, w)
    assert t.entry(0, 1) == pytest.approx(0.5)  # n/(lam + n - 1) at n = 1


def test_t3_reduces_to_t2_on_the_coincidence_line():
    p = RepnParams(BILATERAL, 0.4, 0.3 + 0j)  # mu = (1 - lam)/2
    w = TruncationWindow(BILATERAL, 16, 4)
    t2 = canonical_shift("T2", p, w)
    t3 = canonical_shift("T3", p, w)
    assert np.max(np.abs(t2.data - t3.data)) <= 1e-14


def test_canonical_shift_compatibility():
    w_uni = TruncationWindow(UNILATERAL, 6, 1)
    w_bil = TruncationWindow(BILATERAL, 6, 1)
    with pytest.raises(ParameterError):
        canonical_shift("T2", HOLO2, w_uni)
    with pytest.raises(ParameterError):
        canonical_shift("T1", PRIN, w_bil)
    with pytest.raises(ParameterError):
        canonical_shift("T9", HOLO2, w_uni)
    canonical_shift("T3", RepnParams(BILATERAL, 1.0, 2j), w_bil)  # non-integer mu is fine
    with pytest.raises(PoleError):
        canonical_shift("T3", RepnParams(BILATERAL, 0.5, 1.0 + 0j), w_bil)


# ---------------------------------------------------------------- weights


def test_weight_values_holomorphic():
    tag = SeriesTag(HOLO)
    p1 = RepnParams(UNILATERAL, 1.0)
    for n in range(5):
        assert weight_sequence(tag, p1, n) == pytest.approx(1.0)
    assert weight_sequence(tag, HOLO2, 0) == pytest.approx(math.sqrt(0.5), abs=1e-12)
    with pytest.raises(ParameterError):
        weight_sequence(tag, HOLO2, -1)


def test_weight_values_antiholomorphic():
    tag = SeriesTag(ANTIHOLO)
    p = RepnParams(UNILATERAL, 0.5)
    assert weight_sequence(tag, p, -1) == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert weight_sequence(tag, p, 0) == 0.0
    assert weight_sequence(tag, RepnParams(UNILATERAL, 1.0), 0) == 0.0
    with pytest.raises(ParameterError):
        weight_sequence(tag, p, 1)


def test_weight_values_principal_branches():
    tag = SeriesTag(PRINCIPAL)
    assert weight_sequence(tag, PRIN, 7) == 1.0
    n = 3
    expected = (PRIN.lam + PRIN.mu + n) / (n + 1.0 - PRIN.mu)
    assert weight_sequence(tag, PRIN, n, branch="T3") == pytest.approx(expected)
    with pytest.raises(ParameterError):
        weight_sequence(tag, PRIN, 0, branch="T9")


def test_weight_values_complementary():
    tag = SeriesTag(COMPLEMENTARY)
    n = 2
    expected = math.sqrt((1.0 - 0.2 + n) / (0.4 + 0.2 + n))
    assert weight_sequence(tag, COMP, n) == pytest.approx(expected, abs=1e-12)
    with pytest.raises(ParameterError):
        weight_sequence(tag, COMP, 0, branch="T3")


def test_weight_values_reducible():
    tag = SeriesTag.reducible(1.0, 0.5)
    assert weight_sequence(tag, None, -2) == 1.0
    assert weight_sequence(tag, None, -1) == 0.5
    assert weight_sequence(tag, None, 0) == 1.0


# ---------------------------------------------------------------- basis change


def test_to_orthonormal_principal_is_unchanged():
    w = TruncationWindow(BILATERAL, 12, 3)
    t2 = canonical_shift("T2", PRIN, w)
    out = to_orthonormal(t2, gram(PRIN, w))
    np.testing.assert_array_equal(out.data, t2.data)
    assert out.basis == ORTHONORMAL


def test_to_orthonormal_t1_matches_weight_sequence():
    w = TruncationWindow(UNILATERAL, 24, 4)
    out = to_orthonormal(canonical_shift("T1", HOLO2, w), gram(HOLO2, w))
    tag = SeriesTag(HOLO)
    for n in range(0, w.hi):
        assert abs(out.entry(n + 1, n) - weight_sequence(tag, HOLO2, n)) <= 1e-12


def test_to_orthonormal_t1star_matches_antiholomorphic_weights():
    # x_n built on f_{-n}: the weight at n <= 0 shows up at column -n
    w = TruncationWindow(UNILATERAL, 24, 4)
    p = RepnParams(UNILATERAL, 0.5)
    out = to_orthonormal(canonical_shift("T1star", p, w), gram(p, w))
    tag = SeriesTag(ANTIHOLO)
    for n in range(1, w.hi + 1):
        assert abs(out.entry(n - 1, n) - weight_sequence(tag, p, -n)) <= 1e-12


def test_to_orthonormal_t3_complementary_simplifies():
    w = TruncationWindow(BILATERAL, 24, 4)
    out = to_orthonormal(canonical_shift("T3", COMP, w), gram(COMP, w))
    lam, mu = COMP.lam, COMP.mu.real
    for n in range(w.lo, w.hi):
        expected = math.sqrt((lam + mu + n) / (1.0 - mu + n))
        assert abs(out.entry(n + 1, n) - expected) <= 1e-12
    assert out.entry(1, 0) == pytest.approx(math.sqrt(0.75), abs=1e-10)


def test_to_orthonormal_validates_gram():
    w = TruncationWindow(UNILATERAL, 4, 1)
    t = canonical_shift("T1", HOLO2, TruncationWindow(UNILATERAL, 4, 1))
    bad = OperatorMatrix.from_diagonal([1.0, -1.0, 1.0, 1.0, 1.0], w)
    with pytest.raises(ParameterError):
        to_orthonormal(t, bad)
    dense = OperatorMatrix(np.ones((5, 5)), w)
    with pytest.raises(ParameterError):
        to_orthonormal(t, dense)


def test_gram_adjoint_of_t1_is_t1star():
    w = TruncationWindow(UNILATERAL, 24, 4)
    g = gram(HOLO2, w)
    adj = gram_adjoint(canonical_shift("T1", HOLO2, w), g)
    expected = canonical_shift("T1star", HOLO2, w)
    assert np.max(np.abs(adj.data - expected.data)) <= 1e-12


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
def test_t1_and_its_adjoint_do_not_commute(lam):
    p = RepnParams(UNILATERAL, lam)
    w = TruncationWindow(UNILATERAL, 16, 2)
    t1 = canonical_shift("T1", p, w)
    t1s = canonical_shift("T1star", p, w)
    comm = t1 @ t1s - t1s @ t1
    assert abs(comm.entry(0, 0)) == pytest.approx(1.0 / lam, abs=1e-12)
    assert comm.norm_fro > 0.1 / lam


def test_principal_t3_weights_unimodular():
    tag = SeriesTag(PRINCIPAL)
    for n in range(-64, 65):
        w = weight_sequence(tag, PRIN, n, branch="T3")
        assert abs(abs(w) - 1.0) <= 1e-12


def test_complementary_weights_approach_one():
    tag = SeriesTag(COMPLEMENTARY)
    for n in list(range(-64, -7)) + list(range(8, 65)):
        w = weight_sequence(tag, COMP, n)
        assert abs(w - 1.0) <= 2.0 / abs(n)


# ---------------------------------------------------------------- reducible shift


def test_reducible_shift_coefficients():
    w = TruncationWindow(BILATERAL, 6, 1)
    t = reducible_shift(ReducibleShiftSpec(1.0, 0.5), w)
    for n in range(w.lo, w.hi):
        expected = 0.5 if n == -1 else 1.0
        assert t.entry(n + 1, n) == pytest.approx(expected)


def test_reducible_shift_below_seam_value():
    w = TruncationWindow(BILATERAL, 6, 1)
    t = reducible_shift(ReducibleShiftSpec(1.5, 1.0), w)
    assert t.entry(-2, -3) == pytest.approx(4.0 / 3.0)  # (1 + n)/(lam + n) at n = -3


def test_reducible_shift_with_unit_coupling_is_t2():
    w = TruncationWindow(BILATERAL, 8, 2)
    t = reducible_shift(ReducibleShiftSpec(1.0, 1.0), w)
    t2 = canonical_shift("T2", PRIN, w)
    np.testing.assert_array_equal(t.data, t2.data)


def test_reducible_shift_block_structure():
    # rows/cols >= 0 against < 0: the coupling block has exactly one entry
    w = TruncationWindow(BILATERAL, 6, 1)
    t = reducible_shift(ReducibleShiftSpec(1.3, 0.7), w)
    neg = [w.pos(n) for n in range(w.lo, 0)]
    pos = [w.pos(n) for n in range(0, w.hi + 1)]
    upper_right = t.data[np.ix_(neg, pos)]  # maps the n >= 0 block downward
    assert np.count_nonzero(upper_right) == 0
    lower_left = t.data[np.ix_(pos, neg)]
    assert np.count_nonzero(lower_left) == 1
    assert t.entry(0, -1) == pytest.approx(0.7)


def test_reducible_shift_validation():
    w = TruncationWindow(BILATERAL, 6, 1)
    with pytest.raises(ParameterError):
        ReducibleShiftSpec(0.0, 1.0)
    with pytest.raises(ParameterError):
        ReducibleShiftSpec(1.0, 11.0)
    with pytest.raises(WindowMismatchError):
        reducible_shift(ReducibleShiftSpec(1.0, 1.0), TruncationWindow(UNILATERAL, 6, 1))
