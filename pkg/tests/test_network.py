import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bracedmzi.fock import FockError, basis_state, complete_basis, inner_product, make_state
from bracedmzi.network import (
    BeamSplitterSpec,
    ModeUnitary,
    NetworkError,
    apply,
    apply_many,
    balanced_bs,
    bs_unitary,
    compose,
    embed,
    phase_unitary,
    transition_amplitude,
)
from bracedmzi.oracle import permanent, permanent_amplitude
from conftest import small_states, unitaries

S2 = math.sqrt(2)


def test_balanced_bs_values():
    bs = balanced_bs()
    assert bs.T == 0.7071067811865476
    assert bs.R == 0.7071067811865476j
    assert abs(bs.T) ** 2 + abs(bs.R) ** 2 == pytest.approx(1)
    assert bs.R * bs.T.conjugate() + bs.T * bs.R.conjugate() == pytest.approx(0)


@pytest.mark.parametrize("T,R", [(0.8, 0.8), (1, 1j * 0.1), (0.6, 0.8)])
def test_invalid_beam_splitter(T, R):
    with pytest.raises(NetworkError):
        BeamSplitterSpec(T, R)


def test_bs_unitary_conventions():
    np.testing.assert_allclose(bs_unitary(balanced_bs()).matrix, [[1 / S2, 1j / S2], [1j / S2, 1 / S2]])
    np.testing.assert_allclose(bs_unitary(BeamSplitterSpec(1, 0)).matrix, np.eye(2))
    np.testing.assert_allclose(bs_unitary(BeamSplitterSpec(0, 1j)).matrix, [[0, 1j], [1j, 0]])


def test_mode_unitary_rejects_non_unitary():
    with pytest.raises(NetworkError):
        ModeUnitary(np.array([[1, 1], [0, 1]]))
    with pytest.raises(NetworkError):
        ModeUnitary(np.ones((2, 3)))


def test_phase_unitary():
    np.testing.assert_allclose(phase_unitary(0.0, 0, 2).matrix, np.eye(2))
    np.testing.assert_allclose(phase_unitary(math.pi, 0, 2).matrix, np.diag([-1, 1]), atol=1e-15)
    with pytest.raises(NetworkError):
        phase_unitary(1.0, 2, 2)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_phase_group_property(a, b):
    lhs = compose(phase_unitary(a, 1, 3), phase_unitary(b, 1, 3)).matrix
    np.testing.assert_allclose(lhs, phase_unitary(a + b, 1, 3).matrix, atol=1e-12)


def test_embed_identity_and_block():
    np.testing.assert_allclose(embed(ModeUnitary.identity(2), (0, 1), 4).matrix, np.eye(4))
    m = embed(bs_unitary(balanced_bs()), (2, 3), 4).matrix
    np.testing.assert_allclose(m[:2, :2], np.eye(2))
    assert not m[:2, 2:].any() and not m[2:, :2].any()


def test_embed_errors():
    u = bs_unitary(balanced_bs())
    for targets in [(0, 0), (0, 4), (0, 1, 2)]:
        with pytest.raises(NetworkError):
            embed(u, targets, 4)


def test_compose_identity_and_inverse():
    u = embed(bs_unitary(balanced_bs()), (0, 2), 3)
    np.testing.assert_allclose(compose(u, ModeUnitary.identity(3)).matrix, u.matrix)
    np.testing.assert_allclose(compose(u, u.dagger).matrix, np.eye(3), atol=1e-15)
    with pytest.raises(NetworkError):
        compose(u, ModeUnitary.identity(2))


def test_compose_is_circuit_order():
    # a phase before a splitter differs from a splitter before the phase
    bs, ph = bs_unitary(balanced_bs()), phase_unitary(0.7, 1, 2)
    np.testing.assert_allclose(compose(ph, bs).matrix, bs.matrix @ ph.matrix)


def test_permutation_routing():
    p = ModeUnitary.permutation((2, 0, 1))
    out = apply(p, basis_state((1, 0, 0)))
    assert out == basis_state((0, 0, 1))
    with pytest.raises(NetworkError):
        ModeUnitary.permutation((0, 0, 1))


def test_apply_hong_ou_mandel():
    out = apply(bs_unitary(balanced_bs()), basis_state((1, 1)))
    expected = make_state(2, [((2, 0), 1j / S2), ((0, 2), 1j / S2)])
    assert set(out.amplitudes) == set(expected.amplitudes)
    for k, v in expected:
        assert out[k] == pytest.approx(v, abs=1e-14)


def test_apply_single_photon_split():
    out = apply(bs_unitary(balanced_bs()), basis_state((1, 0)))
    assert out[(1, 0)] == pytest.approx(1 / S2)
    assert out[(0, 1)] == pytest.approx(1j / S2)


def test_apply_two_photons_same_port():
    # (T a0+ + R a1+)^2 / sqrt(2) |0> expanded by hand
    T, R = 1 / S2, 1j / S2
    out = apply(bs_unitary(balanced_bs()), basis_state((2, 0)))
    assert out[(2, 0)] == pytest.approx(T * T, abs=1e-14) == pytest.approx(0.5)
    assert out[(1, 1)] == pytest.approx(S2 * T * R, abs=1e-14) == pytest.approx(1j / S2)
    assert out[(0, 2)] == pytest.approx(R * R, abs=1e-14) == pytest.approx(-0.5)


def test_apply_dimension_mismatch():
    with pytest.raises(FockError):
        apply(bs_unitary(balanced_bs()), basis_state((1, 0, 0)))


def test_permanent_small_cases():
    assert permanent(np.zeros((0, 0))) == 1
    assert permanent(np.array([[1, 2], [3, 4]])) == 10
    a = np.arange(9).reshape(3, 3)
    brute = sum(math.prod(a[i, p[i]] for i in range(3)) for p in itertools.permutations(range(3)))
    assert permanent(a) == brute


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), unitaries(n))), st.data())
def test_norm_preserved(n_u, data):
    n, u = n_u
    state = data.draw(small_states(mode_count=n))
    out = apply(ModeUnitary(u), state)
    assert out.norm_squared() == pytest.approx(state.norm_squared(), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(unitaries(3), unitaries(3), small_states(mode_count=3))
def test_functoriality(u1, u2, state):
    a, b = ModeUnitary(u1), ModeUnitary(u2)
    lhs = apply(compose(a, b), state)
    rhs = apply(b, apply(a, state))
    diff = lhs - rhs
    assert inner_product(diff, diff).real < 1e-20


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), unitaries(n))))
def test_expansion_matches_permanent(n_u):
    n, u = n_u
    mu = ModeUnitary(u)
    for photons in range(4):
        basis = complete_basis(n, photons)
        for ket_in in basis:
            for ket_out in basis:
                ours = transition_amplitude(mu, ket_out, ket_in)
                assert ours == pytest.approx(permanent_amplitude(u, ket_out, ket_in), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(unitaries(4), st.lists(st.floats(-1, 1), min_size=4, max_size=4))
def test_single_photon_is_matrix_vector(u, coeffs):
    vec = np.array(coeffs, dtype=complex) + 0.1
    state = make_state(4, [(tuple(int(j == k) for j in range(4)), vec[k]) for k in range(4)])
    out = apply(ModeUnitary(u), state)
    expected = u @ vec
    for j in range(4):
        assert out[tuple(int(i == j) for i in range(4))] == pytest.approx(expected[j], abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(unitaries(3), unitaries(3), small_states(mode_count=3))
def test_apply_many_matches_apply(u1, u2, state):
    batch = apply_many(np.stack([u1, u2]), state)
    for i, u in enumerate((u1, u2)):
        single = apply(ModeUnitary(u), state)
        for ket, amps in batch.items():
            assert amps[i] == pytest.approx(single[ket], abs=1e-12)
        assert set(single.amplitudes) <= set(batch)
