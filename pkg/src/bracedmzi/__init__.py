"""Few-photon linear-optics simulator for braced Mach-Zehnder interferometers."""

from .analysis import DualityMetrics, SweepGrid, duality, duality_audit, measured_visibility, sweep_p46
from .experiments import (
    BracedMzi,
    ExperimentParams,
    InputKind,
    WheelerMzi,
    braced_unitary,
    coincidence,
    input_state,
    mzi_duality,
    mzi_output,
    output_state,
    sector_decompose,
)
from .fock import (
    FockBasisState,
    FockError,
    ReducedDensityMatrix,
    StateVector,
    inner_product,
    make_state,
    number_expectation,
    partial_trace,
    projection_probability,
)
from .network import BeamSplitterSpec, ModeUnitary, apply, balanced_bs, bs_unitary, compose, embed, phase_unitary

__version__ = "0.1.0"
