"""Blind separation of convolutive mixtures via a sliding-window Z transform.

A windowed Z-domain comb operator turns FIR convolutive mixtures into
(approximately) instantaneous ones, JADE separates them, and a stable
inverse recursion brings the separated channels back to the time domain.
"""

from .jade import (
    DegenerateMixtureError,
    JadeModel,
    JointDiagResult,
    WhiteningResult,
    center_whiten,
    cumulant_matrices,
    jacobi_eigh,
    jade_separate,
    joint_diagonalize,
)
from .mixing import ConvolutiveMixer, mix, mixer_at_z, random_mixer
from .pipeline import (
    ExperimentConfig,
    RunReport,
    SeparationInfo,
    default_config,
    run_experiment,
    szt_bss_separate,
)
from .signals import (
    CorrelationReport,
    MultiSignal,
    Signal,
    WavFormatError,
    correlation,
    load_wav,
    match_and_score,
    read_csv,
    write_csv,
)
from .sources import (
    awgn,
    gen_audio_like,
    gen_gauss_pulse_train,
    gen_qpsk,
    gen_wgn,
    make_rng,
)
from .szt import (
    SztParams,
    burn_in_length,
    comb_forward,
    comb_inverse,
    sample_z,
    windowed_z,
)

__version__ = "0.1.0"

__all__ = [
    "Signal",
    "MultiSignal",
    "CorrelationReport",
    "WavFormatError",
    "correlation",
    "match_and_score",
    "load_wav",
    "read_csv",
    "write_csv",
    "make_rng",
    "gen_qpsk",
    "gen_gauss_pulse_train",
    "gen_wgn",
    "gen_audio_like",
    "awgn",
    "ConvolutiveMixer",
    "random_mixer",
    "mix",
    "mixer_at_z",
    "SztParams",
    "sample_z",
    "windowed_z",
    "comb_forward",
    "comb_inverse",
    "burn_in_length",
    "DegenerateMixtureError",
    "WhiteningResult",
    "JointDiagResult",
    "JadeModel",
    "jacobi_eigh",
    "center_whiten",
    "cumulant_matrices",
    "joint_diagonalize",
    "jade_separate",
    "ExperimentConfig",
    "RunReport",
    "SeparationInfo",
    "default_config",
    "szt_bss_separate",
    "run_experiment",
]
