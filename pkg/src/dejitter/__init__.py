"""Removal of line, line-pixel and pixel jitter from images.

Line and line-pixel jitter are solved to global optimality by chain dynamic
programming; pixel jitter is minimised by block coordinate descent whose
sweeps are exact chain solves.  A synthesis pipeline generates seeded
corrupted images so experiments round-trip end to end.
"""

from .chain import ChainProblem, ChainSolution, evaluate, solve_chain, solve_chain_ternary
from .fields import (
    EnergyParams,
    LineDisplacement,
    ScalarField,
    VectorField,
    labels_for,
    load_line_displacement,
    load_scalar_field,
    load_vector_field,
    save_line_displacement,
    save_scalar_field,
    save_vector_field,
)
from .image import Image, load_png, pnorm_pow, sample, save_png
from .line import build_line_problem, dejitter_line, reconstruct_line
from .line_pixel import build_column_problem, dejitter_line_pixel, reconstruct_line_pixel
from .metrics import (
    displacement_accuracy,
    mse,
    psnr,
    scalar_field_accuracy,
    vector_field_accuracy,
)
from .pixel import (
    BcdTrace,
    SweepKind,
    SWEEP_CYCLE,
    bcd_sweep,
    dejitter_pixel,
    pixel_energy,
    reconstruct_pixel,
)
from .synthesis import (
    SynthesisSpec,
    add_noise,
    synthesize_line,
    synthesize_line_pixel,
    synthesize_pixel,
)

__version__ = "0.1.0"

__all__ = [
    "BcdTrace",
    "ChainProblem",
    "ChainSolution",
    "EnergyParams",
    "Image",
    "LineDisplacement",
    "ScalarField",
    "SweepKind",
    "SWEEP_CYCLE",
    "SynthesisSpec",
    "VectorField",
    "add_noise",
    "bcd_sweep",
    "build_column_problem",
    "build_line_problem",
    "dejitter_line",
    "dejitter_line_pixel",
    "dejitter_pixel",
    "displacement_accuracy",
    "evaluate",
    "labels_for",
    "load_line_displacement",
    "load_png",
    "load_scalar_field",
    "load_vector_field",
    "mse",
    "pixel_energy",
    "pnorm_pow",
    "psnr",
    "reconstruct_line",
    "reconstruct_line_pixel",
    "reconstruct_pixel",
    "sample",
    "save_line_displacement",
    "save_png",
    "save_scalar_field",
    "save_vector_field",
    "scalar_field_accuracy",
    "solve_chain",
    "solve_chain_ternary",
    "synthesize_line",
    "synthesize_line_pixel",
    "synthesize_pixel",
    "vector_field_accuracy",
]
