import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle_states import exact
from quditnc.errors import DomainError, ZeroStateError
from quditnc.fock import (NGBSParams, QuditState, add_photons, binomial_state, fock, make_qudit, ngbs,
                          prepare, subtract_photons)

amplitude = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
states = st.builds(
    lambda amps, off: make_qudit(amps, off),
    st.lists(amplitude, min_size=1, max_size=10).filter(lambda a: np.linalg.norm(a) > 1e-3),
    st.integers(0, 6),
)


def lowering(dim):
    return np.diag(np.sqrt(np.arange(1, dim)), 1)


class TestMakeQudit:
    def test_two_level(self):
        s = make_qudit([1, 1], 0)
        assert np.allclose(s.amplitudes, [1 / math.sqrt(2)] * 2)
        assert s.offset == 0

    def test_scaling(self):
        assert np.allclose(make_qudit([0, 0, 5]).amplitudes, [0, 0, 1])

    def test_complex_with_offset(self):
        s = make_qudit([3, 4j], 2)
        assert np.allclose(s.amplitudes, [0.6, 0.8j])
        assert list(s.indices) == [2, 3]

    def test_zero_state(self):
        with pytest.raises(ZeroStateError):
            make_qudit([0, 0])
        with pytest.raises(ZeroStateError):
            make_qudit([])

    def test_immutable(self):
        s = make_qudit([1, 2])
        with pytest.raises(ValueError):
            s.amplitudes[0] = 3


class TestNGBS:
    def test_binomial_limit_m1(self):
        s = ngbs(NGBSParams(1, 0.25, 0.0))
        assert np.allclose(s.amplitudes, [math.sqrt(0.75), 0.5], atol=1e-15)

    def test_negative_q_self_normalized(self):
        s = ngbs(NGBSParams(10, 0.8, -0.01))
        assert s.dim == 11
        assert s.prenorm_deviation < 1e-9

    def test_positive_q_real_nonnegative(self):
        w = NGBSParams(10, 0.8, 0.01).weights()
        assert np.all(w >= 0)
        s = ngbs(NGBSParams(10, 0.8, 0.01))
        assert np.all(s.amplitudes.imag == 0) and np.all(s.amplitudes.real >= 0)

    def test_matches_exact_weights(self):
        w, _ = exact("ngbs_10_08_m001")
        expected = np.sqrt(np.array([float(x) for x in w]) / float(sum(w)))
        assert np.allclose(ngbs(NGBSParams(10, 0.8, -0.01)).amplitudes.real, expected, rtol=1e-13, atol=0)

    @pytest.mark.parametrize("M, p, q", [(10, 0.0, 0.01), (10, 0.05, -0.01), (10, 0.95, -0.01),
                                         (10, 0.5, -0.2), (-1, 0.5, 0.0), (3, 1.2, 0.0)])
    def test_invalid_params(self, M, p, q):
        with pytest.raises(DomainError):
            NGBSParams(M, p, q)

    def test_error_names_offending_index(self):
        with pytest.raises(DomainError, match="n=6"):
            NGBSParams(10, 0.05, -0.01)

    def test_p_one_is_fock(self):
        s = binomial_state(4, 1.0)
        assert np.allclose(np.abs(s.amplitudes), [0, 0, 0, 0, 1])


class TestAddPhotons:
    def test_against_creation_matrix(self):
        s = add_photons(make_qudit([1, 1]), 1)
        assert s.offset == 1
        assert np.allclose(s.amplitudes, [1 / math.sqrt(3), math.sqrt(2 / 3)])
        # truncated creation matrix route
        a_dag = lowering(4).T
        vec = a_dag @ np.array([1, 1, 0, 0]) / math.sqrt(2)
        vec /= np.linalg.norm(vec)
        assert np.allclose(s.dense(4), vec)

    def test_identity(self):
        s = make_qudit([1, 2j, 3])
        assert add_photons(s, 0) is s

    def test_vacuum(self):
        s = add_photons(fock(0), 3)
        assert s.offset == 3 and np.allclose(s.amplitudes, [1])

    def test_negative(self):
        with pytest.raises(DomainError):
            add_photons(fock(0), -1)


class TestSubtractPhotons:
    def test_two_level(self):
        s = subtract_photons(make_qudit([1, 1]), 1)
        assert s.offset == 0 and np.allclose(s.amplitudes, [1])

    def test_vacuum_annihilated(self):
        with pytest.raises(ZeroStateError):
            subtract_photons(fock(0), 1)
        with pytest.raises(ZeroStateError):
            subtract_photons(make_qudit([1, 1]), 2)

    def test_ngbs_against_annihilation_matrix(self):
        base = ngbs(NGBSParams(10, 0.8, -0.01))
        s = subtract_photons(base, 3)
        assert s.dim == 8 and s.offset == 0
        a = lowering(11)
        vec = np.linalg.matrix_power(a, 3) @ base.dense(11)
        vec /= np.linalg.norm(vec)
        assert np.allclose(s.dense(11), vec, atol=1e-12, rtol=0)

    def test_zero_in_middle_of_support(self):
        s = subtract_photons(make_qudit([1, 0, 0, 1], 0), 1)
        assert s.offset == 0 and s.dim == 3
        assert np.allclose(s.amplitudes, [0, 0, 1])


@settings(max_examples=100, deadline=None)
@given(states, st.integers(0, 5))
def test_operations_preserve_normalization(s, r):
    assert abs(add_photons(s, r).norm() - 1) < 1e-12
    added = add_photons(s, r)
    assert added.offset == s.offset + r
    if s.max_index >= r:
        sub = subtract_photons(s, r)
        assert abs(sub.norm() - 1) < 1e-12
        assert sub.offset >= 0


@pytest.mark.parametrize("n", range(6))
def test_subtract_after_add_on_fock(n):
    s = subtract_photons(add_photons(fock(n), 1), 1)
    assert s.offset == n and np.allclose(s.amplitudes, [1])


def test_subtract_after_add_differs_in_general():
    s = make_qudit([1, 1, 1])
    back = subtract_photons(add_photons(s, 1), 1)
    assert not np.allclose(back.dense(3), s.dense(3))


def _valid(M, p, q):
    return all(0 <= (p + n * q) / (1 + M * q) <= 1 for n in range(M + 1))


def test_ngbs_self_normalization_lattice():
    checked = 0
    for M in range(13):
        for p in np.round(np.arange(0.1, 0.91, 0.1), 10):
            for q in (-0.01, 0.0, 0.01):
                if not _valid(M, p, q):
                    with pytest.raises(DomainError):
                        NGBSParams(M, float(p), q)
                    continue
                w = NGBSParams(M, float(p), q).weights()
                assert abs(w.sum() - 1) < 1e-9
                checked += 1
    assert checked > 300


def test_q_zero_is_binomial():
    for M in range(13):
        for p in np.round(np.arange(0.1, 0.91, 0.1), 10):
            amps = ngbs(NGBSParams(M, float(p), 0.0)).amplitudes.real
            ref = [math.sqrt(math.comb(M, n) * p**n * (1 - p) ** (M - n)) for n in range(M + 1)]
            assert np.max(np.abs(amps - ref)) < 1e-13


@settings(max_examples=100, deadline=None)
@given(states)
def test_record_round_trip_bit_exact(s):
    back = QuditState.from_json(s.to_json())
    assert back.offset == s.offset
    assert back.amplitudes.tobytes() == s.amplitudes.tobytes()
    assert back.fingerprint() == s.fingerprint()


def test_prepare_rejects_composition():
    with pytest.raises(DomainError):
        prepare(10, 0.5, 0.0, add=1, sub=1)
