"""Beam splitters, phase shifters and their action on multi-photon states.

Mode unitaries use the column convention: ``U[j, k]`` is the amplitude with
which the creation operator of input mode ``k`` feeds output mode ``j``, i.e.
``a_k^dagger -> sum_j U[j, k] a_j^dagger``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fock import FockBasisState, FockError, StateVector

UNITARY_TOL = 1e-12


class NetworkError(ValueError):
    pass


@dataclass(frozen=True)
class BeamSplitterSpec:
    """Lossless two-port splitter with transmission ``T`` and reflection ``R``."""

    T: complex
    R: complex

    def __post_init__(self):
        T, R = complex(self.T), complex(self.R)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "R", R)
        if abs(abs(T) ** 2 + abs(R) ** 2 - 1) > UNITARY_TOL:
            raise NetworkError(f"|T|^2 + |R|^2 != 1 for T={T}, R={R}")
        if abs(R * T.conjugate() + T * R.conjugate()) > UNITARY_TOL:
            raise NetworkError(f"R T* + T R* != 0 for T={T}, R={R}")

    @classmethod
    def from_epsilon(cls, epsilon: float) -> BeamSplitterSpec:
        """Splitter with ``T = epsilon`` and ``R = i sqrt(1 - epsilon^2)``."""
        return cls(epsilon, 1j * math.sqrt(max(0.0, 1 - epsilon**2)))


def balanced_bs() -> BeamSplitterSpec:
    h = math.sqrt(0.5)  # correctly rounded 1/sqrt(2)
    return BeamSplitterSpec(h, 1j * h)


@dataclass(frozen=True, eq=False)
class ModeUnitary:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NetworkError(f"mode unitary must be square, got shape {m.shape}")
        if np.abs(m @ m.conj().T - np.eye(len(m))).max(initial=0.0) > UNITARY_TOL:
            raise NetworkError("matrix is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def mode_count(self) -> int:
        return self.matrix.shape[0]

    @property
    def dagger(self) -> ModeUnitary:
        return ModeUnitary(self.matrix.conj().T)

    @classmethod
    def identity(cls, mode_count: int) -> ModeUnitary:
        return cls(np.eye(mode_count, dtype=complex))

    @classmethod
    def permutation(cls, routing: Sequence[int]) -> ModeUnitary:
        """Relabel modes: input mode ``k`` is sent to output mode ``routing[k]``."""
        n = len(routing)
        if sorted(routing) != list(range(n)):
            raise NetworkError(f"{routing} is not a permutation")
        m = np.zeros((n, n), dtype=complex)
        for k, j in enumerate(routing):
            m[j, k] = 1
        return cls(m)


def bs_unitary(spec: BeamSplitterSpec) -> ModeUnitary:
    """2x2 splitter matrix; each input keeps its own index on transmission."""
    return ModeUnitary(np.array([[spec.T, spec.R], [spec.R, spec.T]]))


def phase_unitary(phi: float, mode: int, mode_count: int) -> ModeUnitary:
    if not 0 <= mode < mode_count:
        raise NetworkError(f"mode {mode} out of range for {mode_count} modes")
    diag = np.ones(mode_count, dtype=complex)
    diag[mode] = np.exp(1j * phi)
    return ModeUnitary(np.diag(diag))


def embed(u: ModeUnitary, target_modes: Sequence[int], total_modes: int) -> ModeUnitary:
    """Place ``u`` on ``target_modes`` (in order) of a ``total_modes`` network."""
    targets = list(target_modes)
    if len(targets) != u.mode_count:
        raise NetworkError(f"need {u.mode_count} target modes, got {len(targets)}")
    if len(set(targets)) != len(targets):
        raise NetworkError(f"overlapping target modes {targets}")
    if any(not 0 <= t < total_modes for t in targets):
        raise NetworkError(f"target modes {targets} out of range for {total_modes} modes")
    m = np.eye(total_modes, dtype=complex)
    m[np.ix_(targets, targets)] = u.matrix
    return ModeUnitary(m)


def compose(*stages: ModeUnitary) -> ModeUnitary:
    """Chain unitaries in circuit order: ``compose(u1, u2)`` is u1 then u2."""
    if not stages:
        raise NetworkError("nothing to compose")
    n = stages[0].mode_count
    m = np.eye(n, dtype=complex)
    for u in stages:
        if u.mode_count != n:
            raise NetworkError(f"mode_count mismatch: {n} vs {u.mode_count}")
        m = u.matrix @ m
    return ModeUnitary(m)


def _expand_monomial(matrix: np.ndarray, ket: FockBasisState) -> dict[tuple, complex]:
    # Multiply out prod_k (sum_j U[j,k] a_j^dagger)^{n_k}; keys are output
    # occupation tuples, values the raw monomial coefficients. A leading batch
    # axis on `matrix` turns every coefficient into an array over the batch.
    n = len(ket)
    poly: dict[tuple, complex] = {(0,) * n: 1.0 + 0j}
    for k, count in enumerate(ket):
        column = [(j, matrix[..., j, k]) for j in range(n) if np.any(matrix[..., j, k] != 0)]
        for _ in range(count):
            nxt: dict[tuple, complex] = {}
            for occ, c in poly.items():
                for j, u in column:
                    key = occ[:j] + (occ[j] + 1,) + occ[j + 1 :]
                    nxt[key] = nxt.get(key, 0j) + c * u
            poly = nxt
    return poly


def _sqrt_factorials(occ: Sequence[int]) -> float:
    return math.sqrt(math.prod(math.factorial(n) for n in occ))


def apply(u: ModeUnitary, state: StateVector) -> StateVector:
    """Propagate a Fock-space state through the linear network ``u``.

    Each ket ``prod_k (a_k^dagger)^{n_k} / sqrt(n_k!) |0>`` is rewritten with
    the substituted creation operators, expanded, and re-normalised with
    ``sqrt(m_j!)`` on the output side.
    """
    if u.mode_count != state.mode_count:
        raise FockError(f"mode_count mismatch: unitary {u.mode_count}, state {state.mode_count}")
    out: dict[tuple, complex] = {}
    for ket, amp in state:
        scale = amp / _sqrt_factorials(ket)
        for occ, c in _expand_monomial(u.matrix, ket).items():
            out[occ] = out.get(occ, 0j) + scale * c * _sqrt_factorials(occ)
    return StateVector(state.mode_count, out)


def apply_many(matrices: np.ndarray, state: StateVector) -> dict[FockBasisState, np.ndarray]:
    """Run :func:`apply` for a stack of unitaries ``(B, n, n)`` at once.

    Returns, per output ket, the array of its ``B`` amplitudes. No pruning is
    done and unitarity is not re-checked; build the stack from validated
    :class:`ModeUnitary` stages.
    """
    matrices = np.asarray(matrices, dtype=complex)
    if matrices.ndim != 3 or matrices.shape[1:] != (state.mode_count, state.mode_count):
        raise FockError(f"expected a stack of {state.mode_count}x{state.mode_count} matrices, got {matrices.shape}")
    out: dict[tuple, np.ndarray] = {}
    zero = np.zeros(matrices.shape[0], dtype=complex)
    for ket, amp in state:
        scale = amp / _sqrt_factorials(ket)
        for occ, c in _expand_monomial(matrices, ket).items():
            out[occ] = out.get(occ, zero) + scale * c * _sqrt_factorials(occ)
    return {FockBasisState(k): out[k] for k in sorted(out)}


def transition_amplitude(u: ModeUnitary, out_occ: Sequence[int], in_occ: Sequence[int]) -> complex:
    """``<out|U|in>`` via monomial expansion."""
    ket = FockBasisState(in_occ)
    if sum(out_occ) != ket.total:
        return 0j
    coeff = _expand_monomial(u.matrix, ket).get(tuple(out_occ), 0j)
    return coeff * _sqrt_factorials(out_occ) / _sqrt_factorials(ket)
