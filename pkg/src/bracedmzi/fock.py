"""Fock-basis states, sparse state vectors and reduced density matrices.

States are immutable values. Every linear operation returns a new
:class:`StateVector` whose amplitudes below :data:`PRUNE_THRESHOLD` have been
dropped, so the support of a state is exactly the set of basis kets with a
non-negligible amplitude.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

PRUNE_THRESHOLD = 1e-14
TOL = 1e-10


class FockError(ValueError):
    """Raised for malformed states or incompatible mode counts."""


class FockBasisState(tuple):
    """Occupation-number ket ``|n_0, n_1, ...>`` over a fixed set of modes.

    Subclasses ``tuple`` so basis states hash, compare and sort
    lexicographically like plain occupation tuples.
    """

    def __new__(cls, occupations: Iterable[int]):
        occ = tuple(int(n) for n in occupations)
        if not occ:
            raise FockError("a basis state needs at least one mode")
        if any(n < 0 for n in occ):
            raise FockError(f"negative occupation in {occ}")
        return super().__new__(cls, occ)

    @property
    def occupations(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def mode_count(self) -> int:
        return len(self)

    @property
    def total(self) -> int:
        return sum(self)

    def __repr__(self) -> str:
        return "|" + ",".join(str(n) for n in self) + ">"


def _basis(occupations, mode_count: int) -> FockBasisState:
    ket = occupations if isinstance(occupations, FockBasisState) else FockBasisState(occupations)
    if ket.mode_count != mode_count:
        raise FockError(f"{ket!r} has {ket.mode_count} modes, expected {mode_count}")
    return ket


class StateVector:
    """Sparse map from :class:`FockBasisState` to complex amplitude."""

    __slots__ = ("_mode_count", "_amps")

    def __init__(self, mode_count: int, amplitudes: Mapping | None = None):
        if mode_count < 1:
            raise FockError("mode_count must be positive")
        acc: dict[FockBasisState, complex] = {}
        for occ, amp in (amplitudes or {}).items():
            ket = _basis(occ, mode_count)
            acc[ket] = acc.get(ket, 0j) + complex(amp)
        self._mode_count = mode_count
        self._amps = MappingProxyType(
            {k: acc[k] for k in sorted(acc) if abs(acc[k]) >= PRUNE_THRESHOLD}
        )

    @property
    def mode_count(self) -> int:
        return self._mode_count

    @property
    def amplitudes(self) -> Mapping[FockBasisState, complex]:
        return self._amps

    def __getitem__(self, occupations) -> complex:
        return self._amps.get(_basis(occupations, self._mode_count), 0j)

    def __iter__(self):
        return iter(self._amps.items())

    def __len__(self) -> int:
        return len(self._amps)

    def __add__(self, other: StateVector) -> StateVector:
        _check_modes(self, other)
        merged = dict(self._amps)
        for k, v in other._amps.items():
            merged[k] = merged.get(k, 0j) + v
        return StateVector(self._mode_count, merged)

    def __sub__(self, other: StateVector) -> StateVector:
        return self + (-1) * other

    def __mul__(self, scalar: complex) -> StateVector:
        return StateVector(self._mode_count, {k: scalar * v for k, v in self._amps.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self._mode_count == other._mode_count and dict(self._amps) == dict(other._amps)

    def __hash__(self):
        return hash((self._mode_count, tuple(self._amps.items())))

    def __repr__(self) -> str:
        terms = " + ".join(f"({v:.6g}){k!r}" for k, v in self._amps.items())
        return f"StateVector({self._mode_count}, {terms or '0'})"

    def norm_squared(self) -> float:
        return float(sum(abs(v) ** 2 for v in self._amps.values()))

    def photon_numbers(self) -> set[int]:
        return {k.total for k in self._amps}

    def normalized(self) -> StateVector:
        n2 = self.norm_squared()
        if n2 == 0:
            raise FockError("cannot normalize the zero vector")
        return self * (1 / np.sqrt(n2))

    def filter(self, predicate) -> StateVector:
        """Keep only the basis kets for which ``predicate(ket)`` holds."""
        return StateVector(self._mode_count, {k: v for k, v in self._amps.items() if predicate(k)})

    def with_vacuum_modes(self, extra: int) -> StateVector:
        """Append ``extra`` empty modes after the existing ones."""
        pad = (0,) * extra
        return StateVector(self._mode_count + extra, {k + pad: v for k, v in self._amps.items()})

    def to_dense(self, basis: Sequence) -> np.ndarray:
        return np.array([self[b] for b in basis], dtype=complex)


def _check_modes(a: StateVector, b: StateVector) -> None:
    if a.mode_count != b.mode_count:
        raise FockError(f"mode_count mismatch: {a.mode_count} vs {b.mode_count}")


def basis_state(occupations) -> StateVector:
    occ = FockBasisState(occupations)
    return StateVector(occ.mode_count, {occ: 1.0})


def make_state(mode_count: int, entries: Iterable[tuple[Sequence[int], complex]]) -> StateVector:
    """Build a state from ``(occupations, amplitude)`` pairs.

    Repeated kets are summed; zero amplitudes are dropped.
    """
    acc: dict[FockBasisState, complex] = {}
    for occ, amp in entries:
        ket = _basis(occ, mode_count)
        acc[ket] = acc.get(ket, 0j) + complex(amp)
    return StateVector(mode_count, acc)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    _check_modes(a, b)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    total = 0j
    for k, v in small.amplitudes.items():
        w = large.amplitudes.get(k)
        if w is not None:
            total += (v.conjugate() * w) if small is a else (w.conjugate() * v)
    return total


def projection_probability(state: StateVector, outcome) -> float:
    ket = _basis(outcome, state.mode_count)
    return abs(state.amplitudes.get(ket, 0j)) ** 2


def complete_basis(mode_count: int, photons: int) -> list[FockBasisState]:
    """All kets with exactly ``photons`` photons over ``mode_count`` modes, sorted."""
    out = []
    for cuts in itertools.combinations_with_replacement(range(mode_count), photons):
        occ = [0] * mode_count
        for m in cuts:
            occ[m] += 1
        out.append(FockBasisState(occ))
    return sorted(out)


@dataclass(frozen=True)
class ReducedDensityMatrix:
    """Density matrix over the kept modes after tracing out the rest.

    ``kept_modes`` are positions in the parent state; ``basis`` lists kets over
    those modes only, in lexicographic order.
    """

    kept_modes: tuple[int, ...]
    basis: tuple[FockBasisState, ...]
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def is_hermitian(self, tol: float = TOL) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, atol=tol, rtol=0))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix).min())


def partial_trace(state: StateVector, traced_modes: Iterable[int]) -> ReducedDensityMatrix:
    """Trace ``state`` over ``traced_modes`` and return the kept-mode density matrix."""
    traced = sorted(set(traced_modes))
    n = state.mode_count
    if not traced or len(traced) >= n:
        raise FockError("traced_modes must be a proper, nonempty subset of the modes")
    if traced[0] < 0 or traced[-1] >= n:
        raise FockError(f"traced mode out of range for {n} modes")
    kept = tuple(m for m in range(n) if m not in traced)

    # group amplitudes by the configuration of the traced modes
    groups: dict[tuple, dict[FockBasisState, complex]] = {}
    for ket, amp in state:
        env = tuple(ket[m] for m in traced)
        sub = FockBasisState(ket[m] for m in kept)
        groups.setdefault(env, {})[sub] = amp

    basis = tuple(sorted({k for g in groups.values() for k in g}))
    index = {k: i for i, k in enumerate(basis)}
    rho = np.zeros((len(basis), len(basis)), dtype=complex)
    for g in groups.values():
        vec = np.zeros(len(basis), dtype=complex)
        for k, amp in g.items():
            vec[index[k]] = amp
        rho += np.outer(vec, vec.conj())
    return ReducedDensityMatrix(kept, basis, rho)


def number_expectation(rho: ReducedDensityMatrix, mode: int) -> float:
    """``Tr{a_mode^dagger a_mode rho}``; ``mode`` is a position in the parent state."""
    if mode not in rho.kept_modes:
        raise FockError(f"mode {mode} is not among the kept modes {rho.kept_modes}")
    pos = rho.kept_modes.index(mode)
    counts = np.array([k[pos] for k in rho.basis], dtype=float)
    return float(np.real(np.diagonal(rho.matrix) @ counts))
