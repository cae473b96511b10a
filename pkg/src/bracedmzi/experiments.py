"""Preset interferometers: the plain Mach-Zehnder and the braced Mach-Zehnder.

Mode-label map
--------------

Tuples store occupations by position; detectors and ports keep their
physical labels in the public API.

============================  ========================  ===============
setup                         physical label            tuple position
============================  ========================  ===============
MZI input ports               0, 1                      0, 1
MZI arms after BS1            2 (upper), 3 (lower)      0, 1
MZI detectors                 D4, D5                    0, 1
braced input ports            0, 1                      0, 1
braced detectors              D4, D5, D6, D7            0, 1, 2, 3
============================  ========================  ===============

So the single photon ``|1_1 0_0>`` entering port 1 of the MZI is the tuple
``(0, 1)`` and the coincidence ket ``|1_4 1_6>`` is ``(1, 0, 1, 0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .fock import FockBasisState, FockError, StateVector, basis_state, complete_basis, make_state
from .fock import number_expectation, partial_trace, projection_probability
from .network import (
    BeamSplitterSpec,
    ModeUnitary,
    apply,
    apply_many,
    balanced_bs,
    bs_unitary,
    compose,
    embed,
    phase_unitary,
)

MZI_DETECTORS = {4: 0, 5: 1}
BRACED_DETECTORS = {4: 0, 5: 1, 6: 2, 7: 3}
INNER = (4, 5)
OUTER = (6, 7)


class InputKind(str, Enum):
    PAIR = "pair"
    ANTIBUNCHED = "antibunched"
    SUPERPOSED = "superposed"


@dataclass(frozen=True)
class ExperimentParams:
    """Braced-MZI knobs: phase ``phi``, outer splitter ``epsilon``, input weight ``alpha``."""

    phi: float
    epsilon: float
    alpha: float = 1.0

    def __post_init__(self):
        for name in ("phi", "epsilon", "alpha"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not 0 <= self.epsilon <= 1:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")

    @property
    def outer_bs(self) -> BeamSplitterSpec:
        return BeamSplitterSpec.from_epsilon(self.epsilon)

    @property
    def T_w(self) -> complex:
        return self.outer_bs.T

    @property
    def R_w(self) -> complex:
        return self.outer_bs.R


# -- single-photon Mach-Zehnder -------------------------------------------------


@dataclass(frozen=True)
class WheelerMzi:
    bs: BeamSplitterSpec = field(default_factory=balanced_bs)
    phi: float = 0.0
    bs2_present: bool = True


def single_photon_input() -> StateVector:
    """One photon in port 1, vacuum in port 0."""
    return basis_state((0, 1))


def mzi_first_stage(m: WheelerMzi) -> ModeUnitary:
    return bs_unitary(m.bs)


def mzi_second_stage(m: WheelerMzi) -> ModeUnitary:
    """Delay on the lower arm followed by BS2 (or nothing, if BS2 is pulled out)."""
    delay = phase_unitary(m.phi, 1, 2)
    if not m.bs2_present:
        return delay
    return compose(delay, bs_unitary(m.bs))


def mzi_output(m: WheelerMzi, state: StateVector | None = None) -> StateVector:
    state = single_photon_input() if state is None else state
    if state.mode_count != 2:
        raise FockError("the MZI has two input modes")
    return apply(compose(mzi_first_stage(m), mzi_second_stage(m)), state)


def mzi_output_from_arms(m: WheelerMzi, arms: StateVector) -> StateVector:
    """Propagate a state prepared directly in the arms (skipping BS1)."""
    return apply(mzi_second_stage(m), arms)


def mzi_detection(out: StateVector) -> tuple[float, float]:
    """Single-photon detection probabilities ``(P4, P5)``."""
    return projection_probability(out, (1, 0)), projection_probability(out, (0, 1))


def mzi_duality(bs: BeamSplitterSpec) -> tuple[float, float]:
    t2, r2 = abs(bs.T) ** 2, abs(bs.R) ** 2
    return abs(t2 - r2), 2 * abs(bs.T) * abs(bs.R)


# -- braced Mach-Zehnder --------------------------------------------------------


DELAY_MODE = 3


def braced_stages(epsilon: float, inner_bs: BeamSplitterSpec | None = None) -> tuple[ModeUnitary, ModeUnitary]:
    """The braced network split around the delay: ``(before, after)``.

    BS1 feeds the arms at positions 0 and 1. The leaky mirrors BS3/BS4 pull in
    vacuum at positions 2 and 3; their transmitted (leaked) light stays at 0/1
    and the reflected inner light continues at 2/3. The delay acts on the
    lower inner arm (position 3) after the leak. BS2 then closes the inner MZI
    on 2/3, BS5 closes the outer one on 0/1, and a final relabelling routes
    inner light to D4/D5 and leaked light to D6/D7.

    ``inner_bs`` sets BS1 through BS4 together (balanced by default).
    """
    b = bs_unitary(inner_bs or balanced_bs())
    before = compose(
        embed(b, (0, 1), 4),  # BS1
        embed(b, (0, 2), 4),  # BS3, upper leak
        embed(b, (1, 3), 4),  # BS4, lower leak
    )
    after = compose(
        embed(b, (2, 3), 4),  # BS2
        embed(bs_unitary(BeamSplitterSpec.from_epsilon(epsilon)), (0, 1), 4),  # BS5
        ModeUnitary.permutation((2, 3, 0, 1)),
    )
    return before, after


def braced_unitary(params: ExperimentParams, inner_bs: BeamSplitterSpec | None = None) -> ModeUnitary:
    """4-mode transfer matrix from input ports (0, 1) to detectors D4..D7."""
    before, after = braced_stages(params.epsilon, inner_bs)
    return compose(before, phase_unitary(params.phi, DELAY_MODE, 4), after)


@dataclass(frozen=True)
class BracedMzi:
    params: ExperimentParams
    inner_bs: BeamSplitterSpec = field(default_factory=balanced_bs)

    @property
    def mode_labels(self) -> dict[int, int]:
        """Detector label -> tuple position."""
        return dict(BRACED_DETECTORS)

    def unitary(self) -> ModeUnitary:
        return braced_unitary(self.params, self.inner_bs)

    def output(self, kind: InputKind | str = "pair") -> StateVector:
        state = input_state(kind, self.params.alpha).with_vacuum_modes(2)
        return apply(self.unitary(), state)


def input_state(kind: InputKind | str, alpha: float = 1.0) -> StateVector:
    """Two-photon input over ports (0, 1)."""
    kind = InputKind(kind)
    if kind is InputKind.PAIR:
        return basis_state((1, 1))
    s = 1 / math.sqrt(2)
    antibunched = make_state(2, [((2, 0), s), ((0, 2), s)])
    if kind is InputKind.ANTIBUNCHED:
        return antibunched
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha * basis_state((1, 1)) + math.sqrt(1 - alpha**2) * antibunched


def bs1_output(kind: InputKind | str, alpha: float = 1.0) -> StateVector:
    """State in the arms right after BS1."""
    return apply(bs_unitary(balanced_bs()), input_state(kind, alpha))


def output_state(params: ExperimentParams, kind: InputKind | str = InputKind.PAIR) -> StateVector:
    """Two-photon state at detectors D4..D7."""
    return BracedMzi(params).output(kind)


def _inner_count(ket: FockBasisState) -> int:
    return ket[0] + ket[1]


def sector_decompose(state: StateVector) -> tuple[StateVector, StateVector, StateVector]:
    """Split a braced-MZI output into (inner, cross, outer) by photons at D4/D5."""
    if state.mode_count != 4:
        raise FockError("sector decomposition needs a 4-mode braced output")
    if state.photon_numbers() - {2}:
        raise FockError(f"expected a two-photon state, found photon numbers {state.photon_numbers()}")
    return (
        state.filter(lambda k: _inner_count(k) == 2),
        state.filter(lambda k: _inner_count(k) == 1),
        state.filter(lambda k: _inner_count(k) == 0),
    )


def detector_ket(detectors) -> FockBasisState:
    """Ket with one photon at each named detector (labels 4..7)."""
    labels = tuple(detectors)
    if len(set(labels)) != len(labels) or any(d not in BRACED_DETECTORS for d in labels):
        raise ValueError(f"detectors must be distinct labels from {sorted(BRACED_DETECTORS)}, got {labels}")
    occ = [0, 0, 0, 0]
    for d in labels:
        occ[BRACED_DETECTORS[d]] = 1
    return FockBasisState(occ)


def coincidence(params: ExperimentParams, kind: InputKind | str = InputKind.PAIR, detectors=(4, 6)) -> float:
    """Probability of exactly one photon at each of the two named detectors."""
    if len(tuple(detectors)) != 2:
        raise ValueError("a coincidence needs exactly two detectors")
    return projection_probability(output_state(params, kind), detector_ket(detectors))


def coincidence_curve(
    phis, epsilon: float, alpha: float = 1.0, kind: InputKind | str = InputKind.PAIR, detectors=(4, 6)
) -> np.ndarray:
    """:func:`coincidence` evaluated at many phases in one batched propagation."""
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    ExperimentParams(0.0, epsilon, alpha)
    ket = detector_ket(detectors)
    before, after = braced_stages(epsilon)
    delay = np.ones((len(phis), 4), dtype=complex)
    delay[:, DELAY_MODE] = np.exp(1j * phis)
    stack = after.matrix[None] @ (delay[:, :, None] * before.matrix[None])
    amps = apply_many(stack, input_state(kind, alpha).with_vacuum_modes(2))
    return np.abs(amps.get(ket, np.zeros(len(phis)))) ** 2


def detection_patterns(state: StateVector) -> dict[FockBasisState, float]:
    """Probabilities over the full fixed-photon-number basis of ``state``."""
    (n,) = state.photon_numbers() or {0}
    return {k: projection_probability(state, k) for k in complete_basis(state.mode_count, n)}


def singles_rate(params: ExperimentParams, kind: InputKind | str = InputKind.PAIR, detector: int = 4) -> float:
    """Mean count at an inner detector with the outer detectors ignored."""
    if detector not in INNER:
        raise ValueError(f"singles are taken at an inner detector {INNER}, got {detector}")
    rho = partial_trace(output_state(params, kind), [BRACED_DETECTORS[d] for d in OUTER])
    return number_expectation(rho, BRACED_DETECTORS[detector])
